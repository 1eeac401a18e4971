#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "diagram.hpp"
#include "intlinalg.hpp"
#include "laurent.hpp"
#include "linmap.hpp"

namespace khovacable {

// Marker masks store crossing c at bit (n-1-c), sign masks store circle b at bit (nc-1-b), so
// increasing integers enumerate states lexicographically.  A set bit means marker "-" (B-smoothing)
// or circle sign "-".
inline std::uint64_t cbit(int n, int c) { return std::uint64_t(1) << (n - 1 - c); }
inline bool is_b(std::uint64_t mask, int n, int c) { return (mask >> (n - 1 - c)) & 1; }

// Diagram with arcs renumbered 0..arcs-1 in increasing label order.
struct Geometry {
  int n = 0, arcs = 0, free = 0;
  std::vector<std::array<int, 4>> X;
  std::vector<int> label;
  std::map<int, int> index;

  Geometry() = default;
  explicit Geometry(const Diagram& d) : n(int(d.crossings.size())), free(d.total_free_loops()) {
    for (const auto& x : d.crossings)
      for (int a : x.arcs) index.emplace(a, 0);
    for (auto& [a, i] : index) i = arcs++, label.push_back(a);
    for (const auto& x : d.crossings)
      X.push_back({index[x.arcs[0]], index[x.arcs[1]], index[x.arcs[2]], index[x.arcs[3]]});
  }
};

// Circles of a smoothing; crossing circles are numbered by their smallest arc, free loops follow.
struct Smoothing {
  int circles = 0;
  int crossing_circles = 0;
  std::vector<int> circle_of_arc;
};

inline Smoothing smooth(const Geometry& g, std::uint64_t mask) {
  std::vector<int> parent(g.arcs);
  for (int a = 0; a < g.arcs; ++a) parent[a] = a;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int c = 0; c < g.n; ++c) {
    const auto& x = g.X[c];
    bool B = is_b(mask, g.n, c);
    int p = find(x[0]), q = find(x[B ? 3 : 1]);
    if (p != q) parent[std::max(p, q)] = std::min(p, q);
    p = find(x[2]), q = find(x[B ? 1 : 3]);
    if (p != q) parent[std::max(p, q)] = std::min(p, q);
  }
  Smoothing s;
  s.circle_of_arc.assign(g.arcs, -1);
  std::vector<int> id(g.arcs, -1);
  for (int a = 0; a < g.arcs; ++a) {
    int r = find(a);
    if (id[r] < 0) id[r] = s.crossing_circles++;
    s.circle_of_arc[a] = id[r];
  }
  s.circles = s.crossing_circles + g.free;
  return s;
}

inline bool sign_minus(std::uint64_t signs, int nc, int b) { return (signs >> (nc - 1 - b)) & 1; }
inline std::uint64_t sbit(int nc, int b) { return std::uint64_t(1) << (nc - 1 - b); }

struct Term {
  std::uint64_t mask, signs;
  int coef;
};

// One component of the differential: switch crossing c from + to - (Frobenius rules).
// `from` and `to` are the smoothings of `mask` and of mask with c switched.
inline void saddle(const Geometry& g, std::uint64_t mask, const Smoothing& from, std::uint64_t signs, int c,
                   const Smoothing& to, std::vector<Term>& out) {
  const std::uint64_t m2 = mask | cbit(g.n, c);
  const int coef = std::popcount(mask >> (g.n - c)) % 2 ? -1 : 1;
  const auto& x = g.X[c];
  int old1 = from.circle_of_arc[x[0]], old2 = -1, new1 = to.circle_of_arc[x[0]], new2 = -1;
  for (int a : x) {
    int o = from.circle_of_arc[a], w = to.circle_of_arc[a];
    if (o != old1) old2 = o;
    if (w != new1) new2 = w;
  }
  const int nc = from.circles, nc2 = to.circles;
  std::uint64_t base = 0;
  for (int a = 0; a < g.arcs; ++a) {
    int o = from.circle_of_arc[a];
    if (o == old1 || o == old2) continue;
    if (sign_minus(signs, nc, o)) base |= sbit(nc2, to.circle_of_arc[a]);
  }
  for (int k = 0; k < g.free; ++k)
    if (sign_minus(signs, nc, from.crossing_circles + k)) base |= sbit(nc2, to.crossing_circles + k);

  if (old2 >= 0 && new2 < 0) {  // merge
    bool m1 = sign_minus(signs, nc, old1), mm = sign_minus(signs, nc, old2);
    if (m1 && mm) return;
    out.push_back({m2, base | ((m1 || mm) ? sbit(nc2, new1) : 0), coef});
  } else if (old2 < 0 && new2 >= 0) {  // split
    int t1 = std::min(new1, new2), t2 = std::max(new1, new2);
    if (sign_minus(signs, nc, old1)) {
      out.push_back({m2, base | sbit(nc2, t1) | sbit(nc2, t2), coef});
    } else {
      out.push_back({m2, base | sbit(nc2, t2), coef});
      out.push_back({m2, base | sbit(nc2, t1), coef});
    }
  } else {
    throw IdentityError("saddle neither merges nor splits (crossing " + std::to_string(c) + ")");
  }
}

// Basis of the Khovanov chain group: all enhanced states, indexed lexicographically.
class StateSpace {
 public:
  StateSpace() = default;
  StateSpace(const Diagram& d, std::uint64_t cap) : geom_(d) {
    if (geom_.n >= 40) throw CapExceeded(UINT64_MAX, cap);
    const std::uint64_t masks = std::uint64_t(1) << geom_.n;
    if (masks > cap) throw CapExceeded(masks, cap);
    circles_.resize(masks);
    offset_.resize(masks + 1);
    std::uint64_t total = 0;
    for (std::uint64_t m = 0; m < masks; ++m) {
      circles_[m] = std::uint8_t(smooth(geom_, m).circles);
      offset_[m] = total;
      if (circles_[m] >= 40) throw CapExceeded(UINT64_MAX, cap);
      total += std::uint64_t(1) << circles_[m];
      if (total > cap) throw CapExceeded(total, cap);
    }
    offset_[masks] = total;
    n_pos_ = d.positive_crossings();
    n_neg_ = d.negative_crossings();
  }

  const Geometry& geometry() const { return geom_; }
  int crossings() const { return geom_.n; }
  std::uint64_t masks() const { return std::uint64_t(1) << geom_.n; }
  std::size_t size() const { return offset_.empty() ? 0 : offset_.back(); }
  int circles(std::uint64_t m) const { return circles_[m]; }
  std::size_t index(std::uint64_t m, std::uint64_t signs) const { return offset_[m] + signs; }
  std::pair<std::uint64_t, std::uint64_t> decode(std::size_t idx) const {
    auto it = std::upper_bound(offset_.begin(), offset_.end(), idx);
    std::uint64_t m = std::uint64_t(it - offset_.begin()) - 1;
    return {m, idx - offset_[m]};
  }
  int n_pos() const { return n_pos_; }
  int n_neg() const { return n_neg_; }

  int i_of(std::uint64_t m) const { return std::popcount(m) - n_neg_; }
  int j_of(std::uint64_t m, std::uint64_t signs) const {
    int nc = circles_[m];
    int tau = nc - 2 * std::popcount(signs);
    return tau + std::popcount(m) + n_pos_ - 2 * n_neg_;
  }

 private:
  Geometry geom_;
  std::vector<std::uint8_t> circles_;
  std::vector<std::uint64_t> offset_;
  int n_pos_ = 0, n_neg_ = 0;
};

struct EnhancedState {
  std::vector<int> markers;  // +1 = A, -1 = B, per crossing
  std::vector<int> signs;    // +1 / -1 per circle
  int i = 0, j = 0;
};

inline std::vector<EnhancedState> enumerate_states(const Diagram& d, std::uint64_t cap = kDefaultCap) {
  StateSpace sp(d, cap);
  std::vector<EnhancedState> out;
  out.reserve(sp.size());
  for (std::uint64_t m = 0; m < sp.masks(); ++m) {
    int nc = sp.circles(m);
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << nc); ++s) {
      EnhancedState e;
      for (int c = 0; c < sp.crossings(); ++c) e.markers.push_back(is_b(m, sp.crossings(), c) ? -1 : 1);
      for (int b = 0; b < nc; ++b) e.signs.push_back(sign_minus(s, nc, b) ? -1 : 1);
      e.i = sp.i_of(m);
      e.j = sp.j_of(m, s);
      out.push_back(std::move(e));
    }
  }
  return out;
}

struct KhovanovComplex {
  StateSpace space;
  LinearMap d;
  std::map<std::pair<int, int>, std::vector<std::size_t>> blocks;  // (i, j) -> basis indices

  int i_of(std::size_t idx) const { return space.i_of(space.decode(idx).first); }
  int j_of(std::size_t idx) const {
    auto [m, s] = space.decode(idx);
    return space.j_of(m, s);
  }
};

inline KhovanovComplex khovanov_complex(const Diagram& dg, std::uint64_t cap = kDefaultCap) {
  KhovanovComplex kc;
  kc.space = StateSpace(dg, cap);
  const auto& sp = kc.space;
  const auto& g = sp.geometry();
  kc.d = LinearMap(sp.size(), sp.size());
  std::vector<Term> terms;
  for (std::uint64_t m = 0; m < sp.masks(); ++m) {
    Smoothing from = smooth(g, m);
    const std::uint64_t nst = std::uint64_t(1) << from.circles;
    for (std::uint64_t s = 0; s < nst; ++s) kc.blocks[{sp.i_of(m), sp.j_of(m, s)}].push_back(sp.index(m, s));
    for (int c = 0; c < g.n; ++c) {
      if (is_b(m, g.n, c)) continue;
      Smoothing to = smooth(g, m | cbit(g.n, c));
      for (std::uint64_t s = 0; s < nst; ++s) {
        terms.clear();
        saddle(g, m, from, s, c, to, terms);
        for (const auto& t : terms) kc.d.add(sp.index(t.mask, t.signs), sp.index(m, s), t.coef);
      }
    }
  }
  kc.d.finalize();
  return kc;
}

inline std::string describe_state(const StateSpace& sp, std::size_t idx) {
  auto [m, s] = sp.decode(idx);
  std::string out = "markers ";
  for (int c = 0; c < sp.crossings(); ++c) out += is_b(m, sp.crossings(), c) ? '-' : '+';
  out += " signs ";
  int nc = sp.circles(m);
  for (int b = 0; b < nc; ++b) out += sign_minus(s, nc, b) ? '-' : '+';
  return out;
}

// Empty string when d o d = 0, otherwise a description of an offending pair of states.
inline std::string d_squared_witness(const KhovanovComplex& kc) {
  auto w = composition_witness(kc.d, kc.d);
  if (!w) return {};
  return "d^2 != 0: from [" + describe_state(kc.space, w->col) + "] to [" + describe_state(kc.space, w->row) +
         "] coefficient " + std::to_string(w->value);
}

// Checks that d raises i by one and preserves j; returns a witness or "".
inline std::string grading_witness(const KhovanovComplex& kc) {
  for (std::size_t c = 0; c < kc.d.cols; ++c)
    for (const auto& [r, v] : kc.d.col[c])
      if (kc.i_of(r) != kc.i_of(c) + 1 || kc.j_of(r) != kc.j_of(c))
        return "differential breaks grading at [" + describe_state(kc.space, c) + "]";
  return {};
}

inline LaurentPoly graded_euler(const KhovanovComplex& kc) {
  LaurentPoly p('q');
  for (const auto& [ij, v] : kc.blocks) p.add(ij.second, Int(static_cast<long>(v.size())) * (ij.first % 2 ? -1 : 1));
  return p;
}

inline std::map<std::pair<int, int>, HomologySummary> homology(const KhovanovComplex& kc) {
  std::map<std::pair<int, int>, HomologySummary> out;
  static const std::vector<std::size_t> none;
  auto get = [&](int i, int j) -> const std::vector<std::size_t>& {
    auto it = kc.blocks.find({i, j});
    return it == kc.blocks.end() ? none : it->second;
  };
  for (const auto& [ij, basis] : kc.blocks) {
    auto [i, j] = ij;
    IntMatrix d_out = kc.d.block(get(i + 1, j), basis);
    IntMatrix d_in = kc.d.block(basis, get(i - 1, j));
    HomologySummary h = homology_at(d_out, d_in);
    if (!h.trivial()) out[ij] = h;
  }
  return out;
}

}  // namespace khovacable
