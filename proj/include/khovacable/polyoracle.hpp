#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "diagram.hpp"
#include "laurent.hpp"

namespace khovacable {

using KVector = std::vector<int>;

// Kauffman bracket by the plain state sum over all 2^c smoothings.
// Unknot -> -A^2 - A^-2, empty diagram -> 1.
inline LaurentPoly bracket(const Diagram& d, std::uint64_t cap = kDefaultCap) {
  const int n = int(d.crossings.size());
  if (n >= 63 || (std::uint64_t(1) << n) > cap)
    throw CapExceeded(n >= 63 ? UINT64_MAX : std::uint64_t(1) << n, cap);
  std::map<int, int> idx;
  for (const auto& x : d.crossings)
    for (int a : x.arcs) idx.emplace(a, 0);
  int na = 0;
  for (auto& [a, i] : idx) i = na++;
  std::vector<std::array<int, 4>> X;
  for (const auto& x : d.crossings) X.push_back({idx[x.arcs[0]], idx[x.arcs[1]], idx[x.arcs[2]], idx[x.arcs[3]]});

  // count[#A - #B][#loops]
  std::map<std::pair<int, int>, std::int64_t> count;
  std::vector<int> parent(na);
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    int loops = na, b = 0;
    for (int c = 0; c < n; ++c) {
      bool B = (m >> c) & 1;
      b += B;
      int j1 = B ? 3 : 1;
      for (auto [u, v] : {std::pair{X[c][0], X[c][j1]}, std::pair{X[c][2], X[c][B ? 1 : 3]}}) {
        u = find(u), v = find(v);
        if (u != v) parent[u] = v, --loops;
      }
    }
    count[{n - 2 * b, loops + d.total_free_loops()}]++;
  }
  LaurentPoly delta('A');
  delta.add(2, -1);
  delta.add(-2, -1);
  std::vector<LaurentPoly> pw{LaurentPoly::monomial('A', 0)};
  LaurentPoly out('A');
  for (const auto& [key, cnt] : count) {
    while (int(pw.size()) <= key.second) pw.push_back(pw.back() * delta);
    out += pw[key.second].shifted(key.first) * Int(static_cast<long>(cnt));
  }
  return out;
}

// Unnormalized Jones polynomial: (-A)^{-3w} <D> with A^2 = -q^{-1}, so the unknot gives q + q^-1.
inline LaurentPoly jones(const Diagram& d, std::uint64_t cap = kDefaultCap) {
  LaurentPoly br = bracket(d, cap);
  const int w = d.writhe();
  LaurentPoly out('q');
  for (const auto& [e, c] : br.terms()) {
    int x = e - 3 * w;
    if (x % 2 != 0) throw IdentityError("half-integer exponent in Jones substitution (A^" + std::to_string(x) + ")");
    int h = x / 2;  // A^x = (A^2)^h = (-1)^h q^-h
    Int coef = c;
    if ((w + h) % 2 != 0) coef = -coef;
    out.add(-h, coef);
  }
  return out;
}

// prod_i binom(n_i - k_i, k_i)
inline Int binom_tuple(const ColorTuple& n, const KVector& k) {
  if (n.size() != k.size()) throw InputError("k-vector length differs from color tuple");
  Int r = 1;
  for (size_t i = 0; i < n.size(); ++i) {
    if (k[i] < 0 || 2 * k[i] > n[i]) throw InputError("k out of range: need 0 <= k_i <= floor(n_i/2)");
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), unsigned(n[i] - k[i]), unsigned(k[i]));
    r *= b;
  }
  return r;
}

// All k with 0 <= k_i <= floor(n_i/2), lexicographic.
inline std::vector<KVector> all_kvectors(const ColorTuple& n) {
  std::vector<KVector> out{KVector(n.size(), 0)};
  for (size_t i = 0; i < n.size(); ++i) {
    std::vector<KVector> next;
    for (const auto& k : out)
      for (int v = 0; 2 * v <= n[i]; ++v) {
        next.push_back(k);
        next.back()[i] = v;
      }
    out = std::move(next);
  }
  return out;
}

// Cabling formula: sum_k (-1)^|k| binom(n-k, k) J(D^{n-2k}).
inline LaurentPoly colored_jones(const Diagram& d, const ColorTuple& n, std::uint64_t cap = kDefaultCap) {
  if (int(n.size()) != d.components) throw InputError("color tuple length differs from component count");
  LaurentPoly out('q');
  for (const auto& k : all_kvectors(n)) {
    ColorTuple m(n.size());
    int kk = 0;
    for (size_t i = 0; i < n.size(); ++i) m[i] = n[i] - 2 * k[i], kk += k[i];
    Int coef = binom_tuple(n, k);
    if (kk % 2) coef = -coef;
    out += jones(cable(d, m).diagram, cap) * coef;
  }
  return out;
}

}  // namespace khovacable
