#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagram.hpp"
#include "intlinalg.hpp"
#include "polyoracle.hpp"

namespace khovacable {

// Disjoint neighbour pairs (t, t+1) of strand indices, one list per line; stored by t.
struct Pairing {
  std::vector<std::vector<int>> left;

  KVector k() const {
    KVector v;
    for (const auto& l : left) v.push_back(int(l.size()));
    return v;
  }
  int size() const {
    int s = 0;
    for (const auto& l : left) s += int(l.size());
    return s;
  }
  bool contains(int line, int t) const { return std::binary_search(left[line].begin(), left[line].end(), t); }
  std::set<StrandId> strands() const {
    std::set<StrandId> out;
    for (int c = 0; c < int(left.size()); ++c)
      for (int t : left[c]) out.insert({c, t}), out.insert({c, t + 1});
    return out;
  }
  auto operator<=>(const Pairing&) const = default;

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int c = 0; c < int(left.size()); ++c)
      for (int t : left[c]) {
        s += (first ? "" : ",") + std::to_string(c + 1) + ":(" + std::to_string(t) + "," + std::to_string(t + 1) + ")";
        first = false;
      }
    return s + "}";
  }
};

inline void check_pairing(const ColorTuple& n, const Pairing& s) {
  if (s.left.size() != n.size()) throw InputError("pairing has the wrong number of lines");
  for (size_t c = 0; c < n.size(); ++c) {
    for (size_t i = 0; i < s.left[c].size(); ++i) {
      int t = s.left[c][i];
      if (t < 1 || t + 1 > n[c]) throw InputError("pairing references strand index beyond n_c");
      if (i && t <= s.left[c][i - 1] + 1) throw InputError("pairs must be sorted and disjoint");
    }
  }
}

namespace detail {

// k disjoint neighbour pairs among dots 1..n, lexicographic in the sorted list of left ends.
inline void line_pairings(int n, int k, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (int(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int t = from; t + 1 <= n; ++t) {
    cur.push_back(t);
    line_pairings(n, k, t + 2, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline std::vector<Pairing> enumerate_pairings(const ColorTuple& n, const KVector& k) {
  if (n.size() != k.size()) throw InputError("k-vector length differs from color tuple");
  for (size_t i = 0; i < n.size(); ++i)
    if (k[i] < 0 || 2 * k[i] > n[i]) throw InputError("k out of range: need 0 <= k_i <= floor(n_i/2)");
  std::vector<Pairing> out{Pairing{}};
  for (size_t c = 0; c < n.size(); ++c) {
    std::vector<std::vector<int>> lines;
    std::vector<int> cur;
    detail::line_pairings(n[c], k[c], 1, cur, lines);
    std::vector<Pairing> next;
    for (const auto& p : out)
      for (const auto& l : lines) {
        next.push_back(p);
        next.back().left.push_back(l);
      }
    out = std::move(next);
  }
  return out;
}

// All pairings with |k| = total, ordered by k (lexicographic) and then by enumerate_pairings.
inline std::vector<Pairing> pairings_of_grade(const ColorTuple& n, int total) {
  std::vector<Pairing> out;
  for (const auto& k : all_kvectors(n)) {
    if (std::accumulate(k.begin(), k.end(), 0) != total) continue;
    auto ps = enumerate_pairings(n, k);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

struct NewPair {
  int line, t;
};

// s' = s plus exactly one pair.
inline NewPair added_pair(const Pairing& s, const Pairing& s2) {
  if (s.left.size() != s2.left.size() || s2.size() != s.size() + 1)
    throw InputError("not a cover relation in the pairing order");
  std::optional<NewPair> np;
  for (int c = 0; c < int(s.left.size()); ++c) {
    for (int t : s.left[c])
      if (!s2.contains(c, t)) throw InputError("not a cover relation in the pairing order");
    for (int t : s2.left[c])
      if (!s.contains(c, t)) np = NewPair{c, t};
  }
  if (!np) throw InputError("not a cover relation in the pairing order");
  return *np;
}

// (-1)^{(s,s')}: pairs of s' to the right of the new pair on its line, plus all pairs on lines above it.
// "Above" means a smaller line index unless above_smaller is false.
inline int pairing_sign(const Pairing& s, const Pairing& s2, bool above_smaller = true) {
  NewPair np = added_pair(s, s2);
  int count = 0;
  for (int c = 0; c < int(s2.left.size()); ++c) {
    if (c == np.line) {
      for (int t : s2.left[c]) count += t > np.t;
    } else if (above_smaller ? c < np.line : c > np.line) {
      count += int(s2.left[c].size());
    }
  }
  return count % 2 ? -1 : 1;
}

struct PairingGraph {
  ColorTuple n;
  bool above_smaller = true;
  std::vector<std::vector<Pairing>> grade;  // grade[k] = basis of F^k
  struct Edge {
    int k, from, to, sign;  // from: index in grade[k], to: index in grade[k+1]
  };
  std::vector<Edge> edges;

  // d_n^k : F^k -> F^{k+1}
  IntMatrix differential(int k) const {
    std::size_t rows = k + 1 < int(grade.size()) ? grade[k + 1].size() : 0;
    IntMatrix m(rows, grade[k].size());
    for (const auto& e : edges)
      if (e.k == k) m.add(e.to, e.from, e.sign);
    m.normalize();
    return m;
  }

  nlohmann::json to_json() const {
    nlohmann::json v = nlohmann::json::array(), es = nlohmann::json::array();
    for (int k = 0; k < int(grade.size()); ++k)
      for (const auto& p : grade[k]) v.push_back({{"k", k}, {"pairing", p.str()}});
    for (const auto& e : edges)
      es.push_back({{"from", grade[e.k][e.from].str()}, {"to", grade[e.k + 1][e.to].str()}, {"sign", e.sign}});
    return {{"vertices", v}, {"edges", es}};
  }
};

inline PairingGraph pairing_graph(const ColorTuple& n, bool above_smaller = true) {
  PairingGraph g;
  g.n = n;
  g.above_smaller = above_smaller;
  int kmax = 0;
  for (int c : n) kmax += c / 2;
  for (int k = 0; k <= kmax; ++k) g.grade.push_back(pairings_of_grade(n, k));
  for (int k = 0; k < kmax; ++k)
    for (int a = 0; a < int(g.grade[k].size()); ++a)
      for (int b = 0; b < int(g.grade[k + 1].size()); ++b) {
        const auto& s = g.grade[k][a];
        const auto& s2 = g.grade[k + 1][b];
        bool sub = true;
        for (int c = 0; c < int(n.size()) && sub; ++c)
          for (int t : s.left[c])
            if (!s2.contains(c, t)) sub = false;
        if (sub) g.edges.push_back({k, a, b, pairing_sign(s, s2, above_smaller)});
      }
  return g;
}

// Builds Gamma_n with its signed differential and checks d_n^{k+1} d_n^k = 0.
inline PairingGraph pairing_complex(const ColorTuple& n, bool above_smaller = true, int bound = 12) {
  int total = std::accumulate(n.begin(), n.end(), 0);
  if (total > bound) throw CapExceeded(std::uint64_t(total), std::uint64_t(bound));
  PairingGraph g = pairing_graph(n, above_smaller);
  for (int k = 0; k + 2 < int(g.grade.size()); ++k) {
    IntMatrix dd = g.differential(k + 1) * g.differential(k);
    if (!dd.is_zero()) {
      const auto& e = dd.entries().front();
      throw IdentityError("d_n^2 != 0 on the face from " + g.grade[k][e.col].str() + " to " +
                          g.grade[k + 2][e.row].str());
    }
  }
  return g;
}

inline CableDiagram subcable(const CableDiagram& cd, const Pairing& s) {
  check_pairing(cd.colors, s);
  return subcable(cd, s.strands());
}

}  // namespace khovacable
