#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "khovanov.hpp"
#include "linmap.hpp"
#include "pairing.hpp"
#include "polyoracle.hpp"

namespace khovacable {

struct BicomplexOptions {
  bool above_smaller = true;  // "above" = smaller line index
  bool flip_a = false;        // cap (a)-pairs ahead of strand t instead of behind it
  std::uint64_t cap = kDefaultCap;
};

enum class TouchType { a1, a2, b };

inline const char* touch_name(TouchType t) { return t == TouchType::a1 ? "a-1" : t == TouchType::a2 ? "a-2" : "b"; }

struct ContractedCrossing {
  int crossing;  // index in D^s
  TouchType type;
  int marker;    // 0 = A (+), 1 = B (-)
};

// Everything needed to push states of D^s across the annulus glued along (strand, strand+1) of `line`.
struct ContractionContext {
  Pairing s, s2;
  int line = 0, strand = 0;
  CableDiagram ds, ds2;
  std::vector<ContractedCrossing> touched;
  std::vector<int> forced;     // per D^s crossing: -1, or the forced marker
  std::vector<int> to_target;  // per D^s crossing: crossing of D^{s'}, or -1 when it touches the band
  std::vector<char> band_arc;  // per arc of D^s (Geometry numbering)
  std::vector<int> arc_target; // per arc: arc of D^{s'} (>= 0), free loop k of D^{s'} (-2-k), or -1 on the band
  std::vector<char> band_free; // per free loop of D^s
  std::vector<int> free_target;
  Geometry g, g2;
  int type2_anchor = -1;       // the forced-A crossing paired with every forced-B crossing in Type 2

  bool degenerate() const { return touched.empty(); }
};

inline ContractionContext classify_contraction(const CableDiagram& cable_full, const Pairing& s, const Pairing& s2,
                                               bool flip_a = false) {
  ContractionContext ctx;
  NewPair np = added_pair(s, s2);
  ctx.s = s;
  ctx.s2 = s2;
  ctx.line = np.line;
  ctx.strand = np.t;
  ctx.ds = subcable(cable_full, s);
  ctx.ds2 = subcable(cable_full, s2);
  ctx.g = Geometry(ctx.ds.diagram);
  ctx.g2 = Geometry(ctx.ds2.diagram);
  const int t0 = np.t;
  auto on_band = [&](const StrandId& st) { return st.component == np.line && (st.strand == t0 || st.strand == t0 + 1); };

  const auto& D = ctx.ds.diagram;
  const int n = int(D.crossings.size());
  ctx.forced.assign(n, -1);
  ctx.to_target.assign(n, -1);
  std::map<int, int> target_of_full;
  for (int k = 0; k < int(ctx.ds2.full_crossing.size()); ++k) target_of_full[ctx.ds2.full_crossing[k]] = k;

  // group band crossings: squares (both strands on the band) and pairs (one strand on the band)
  std::map<std::tuple<int, int, int, int>, std::vector<int>> groups;
  for (int k = 0; k < n; ++k) {
    const auto& o = ctx.ds.origin[k];
    bool bu = on_band(o.under), bo = on_band(o.over);
    if (bu && bo) groups[{o.source, 0, 0, 0}].push_back(k);
    else if (bu) groups[{o.source, 1, o.over.component, o.over.strand}].push_back(k);
    else if (bo) groups[{o.source, 2, o.under.component, o.under.strand}].push_back(k);
    else ctx.to_target[k] = target_of_full.at(ctx.ds.full_crossing[k]);
  }
  std::vector<TouchType> type(n, TouchType::b);
  for (const auto& [key, ks] : groups) {
    int kind = std::get<1>(key);
    if (kind == 0) {
      if (ks.size() != 4) throw IdentityError("contracted square with " + std::to_string(ks.size()) + " crossings");
      int p0 = INT32_MAX, q0 = INT32_MAX;
      for (int k : ks) p0 = std::min(p0, ctx.ds.origin[k].column), q0 = std::min(q0, ctx.ds.origin[k].row);
      // checkerboard: every side of the square is capped
      for (int k : ks) ctx.forced[k] = (ctx.ds.origin[k].column - p0 + ctx.ds.origin[k].row - q0) % 2;
      continue;
    }
    if (ks.size() != 2) throw IdentityError("contracted pair with " + std::to_string(ks.size()) + " crossings");
    const auto& o0 = ctx.ds.origin[ks[0]];
    if (kind == 1) {
      // band runs vertically in columns t0, t0+1; strand t0 heads north iff t0 is odd
      bool cap_south = (t0 % 2 == 1) != flip_a;
      for (int k : ks) {
        bool west = ctx.ds.origin[k].column == t0;
        ctx.forced[k] = cap_south ? (west ? 0 : 1) : (west ? 1 : 0);
      }
    } else {
      // band runs horizontally; strand t0 heads east iff the over strand runs west->east for odd t0
      bool cap_west = ((o0.source_sign > 0) == (t0 % 2 == 1)) != flip_a;
      int qmin = std::min(ctx.ds.origin[ks[0]].row, ctx.ds.origin[ks[1]].row);
      for (int k : ks) {
        bool south = ctx.ds.origin[k].row == qmin;
        ctx.forced[k] = cap_west ? (south ? 0 : 1) : (south ? 1 : 0);
      }
    }
    for (int k : ks) type[k] = flip_a ? TouchType::a2 : TouchType::a1;
  }
  for (int k = 0; k < n; ++k)
    if (ctx.forced[k] >= 0) {
      ctx.touched.push_back({k, type[k], ctx.forced[k]});
      if (ctx.forced[k] == 0 && ctx.type2_anchor < 0) ctx.type2_anchor = k;
    }

  // arcs and free loops of D^s: band or not, and where they land in D^{s'}
  std::vector<int> free_ordinal2(ctx.ds2.strand_of.size(), -1);
  std::map<StrandId, int> comp2;
  for (int c = 0, f = 0; c < int(ctx.ds2.strand_of.size()); ++c) {
    comp2[ctx.ds2.strand_of[c]] = c;
    if (ctx.ds2.diagram.free_loops[c]) free_ordinal2[c] = f++;
  }
  ctx.band_arc.assign(ctx.g.arcs, 0);
  ctx.arc_target.assign(ctx.g.arcs, -1);
  std::map<int, int> full_of;  // arc of D^s -> some full-cable arc mapping onto it
  for (const auto& [full, a] : ctx.ds.arc_rep) full_of.emplace(a, full);
  for (int a = 0; a < ctx.g.arcs; ++a) {
    int label = ctx.g.label[a];
    const StrandId& st = ctx.ds.strand_of[D.arc_component.at(label)];
    if (on_band(st)) {
      ctx.band_arc[a] = 1;
      continue;
    }
    int c2 = comp2.at(st);
    if (ctx.ds2.diagram.free_loops[c2]) {
      ctx.arc_target[a] = -2 - free_ordinal2[c2];
    } else {
      int l2 = ctx.ds2.arc_rep.at(full_of.at(label));
      ctx.arc_target[a] = ctx.g2.index.at(l2);
    }
  }
  for (int c = 0; c < int(ctx.ds.strand_of.size()); ++c) {
    if (!D.free_loops[c]) continue;
    const StrandId& st = ctx.ds.strand_of[c];
    bool band = on_band(st);
    ctx.band_free.push_back(band);
    ctx.free_target.push_back(band ? -1 : free_ordinal2[comp2.at(st)]);
  }
  return ctx;
}

namespace detail {

// Circle correspondence between a band-forced smoothing of D^s and the induced smoothing of D^{s'}.
struct Transfer {
  std::uint64_t mask2 = 0;
  Smoothing sm, sm2;
  std::vector<int> target;  // per circle of D^s: circle of D^{s'}, or -1 if contracted
  int contracted = 0;
};

inline Transfer make_transfer(const ContractionContext& ctx, std::uint64_t mask) {
  Transfer t;
  const int n = ctx.g.n, n2 = ctx.g2.n;
  for (int k = 0; k < n; ++k)
    if (ctx.to_target[k] >= 0 && is_b(mask, n, k)) t.mask2 |= cbit(n2, ctx.to_target[k]);
  t.sm = smooth(ctx.g, mask);
  t.sm2 = smooth(ctx.g2, t.mask2);
  t.target.assign(t.sm.circles, -2);
  std::vector<char> band_only(t.sm.crossing_circles, 1);
  for (int a = 0; a < ctx.g.arcs; ++a) {
    if (ctx.band_arc[a]) continue;
    int c = t.sm.circle_of_arc[a];
    band_only[c] = 0;
    int at = ctx.arc_target[a];
    int tgt = at >= 0 ? t.sm2.circle_of_arc[at] : t.sm2.crossing_circles + (-2 - at);
    if (t.target[c] == -2) t.target[c] = tgt;
    else if (t.target[c] != tgt) throw IdentityError("contraction convention error: a circle of D^s maps to several circles of D^s'");
  }
  for (int c = 0; c < t.sm.crossing_circles; ++c)
    if (band_only[c]) t.target[c] = -1, t.contracted++;
  for (int k = 0; k < ctx.g.free; ++k) {
    int c = t.sm.crossing_circles + k;
    if (ctx.band_free[k]) t.target[c] = -1, t.contracted++;
    else t.target[c] = t.sm2.crossing_circles + ctx.free_target[k];
  }
  std::vector<char> hit(t.sm2.circles, 0);
  for (int c : t.target) {
    if (c < 0) continue;
    if (hit[c]) throw IdentityError("contraction convention error: two circles of D^s land on one circle of D^s'");
    hit[c] = 1;
  }
  for (char h : hit)
    if (!h) throw IdentityError("contraction convention error: a circle of D^s' has no preimage");
  return t;
}

// Sign correction between the crossing orders of D^s and D^{s'}.
inline int order_sign(const ContractionContext& ctx, std::uint64_t mask) {
  int beta = 0, e = 1;
  for (int k = 0; k < ctx.g.n; ++k) {
    bool B = is_b(mask, ctx.g.n, k);
    if (ctx.forced[k] >= 0) beta += B;
    else if (B && beta % 2) e = -e;
  }
  return e;
}

inline std::uint64_t band_pattern(const ContractionContext& ctx) {
  std::uint64_t m = 0;
  for (const auto& t : ctx.touched)
    if (t.marker) m |= cbit(ctx.g.n, t.crossing);
  return m;
}

// Masks agreeing with `pattern` on the band crossings.
template <class F>
void for_each_mask(const ContractionContext& ctx, std::uint64_t pattern, F&& f) {
  std::vector<int> freec;
  for (int k = 0; k < ctx.g.n; ++k)
    if (ctx.forced[k] < 0) freec.push_back(k);
  for (std::uint64_t r = 0; r < (std::uint64_t(1) << freec.size()); ++r) {
    std::uint64_t m = pattern;
    for (size_t i = 0; i < freec.size(); ++i)
      if ((r >> i) & 1) m |= cbit(ctx.g.n, freec[i]);
    f(m);
  }
}

}  // namespace detail

struct ParityReport {
  std::string edge;
  bool degenerate = false;
  int min_count = 0, max_count = 0;
  bool all_even = true;
};

// The annulus chain map C(D^s) -> C(D^{s'}).
struct AnnulusMap {
  LinearMap phi;
  ParityReport parity;
  std::size_t type1 = 0, type2 = 0;  // nonzero images of each kind
};

inline AnnulusMap annulus_map(const ContractionContext& ctx, const StateSpace& from, const StateSpace& to) {
  AnnulusMap out;
  out.phi = LinearMap(to.size(), from.size());
  out.parity.edge = ctx.s.str() + " -> " + ctx.s2.str();
  out.parity.degenerate = ctx.degenerate();
  out.parity.min_count = INT32_MAX;
  const std::uint64_t vstar = detail::band_pattern(ctx);
  const int n = ctx.g.n;

  std::map<std::uint64_t, detail::Transfer> cache;
  auto transfer = [&](std::uint64_t m) -> const detail::Transfer& {
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, detail::make_transfer(ctx, m)).first;
    return it->second;
  };
  // Type 1 image of (m, signs) with m matching the forced pattern.
  auto type1 = [&](std::uint64_t m, std::uint64_t signs) -> std::optional<std::pair<int, std::size_t>> {
    const auto& t = transfer(m);
    const int nc = t.sm.circles, nc2 = t.sm2.circles;
    std::uint64_t s2 = 0;
    for (int c = 0; c < nc; ++c) {
      bool minus = sign_minus(signs, nc, c);
      if (t.target[c] < 0) {
        if (minus) return std::nullopt;
      } else if (minus) {
        s2 |= sbit(nc2, t.target[c]);
      }
    }
    return std::pair{detail::order_sign(ctx, m), to.index(t.mask2, s2)};
  };

  detail::for_each_mask(ctx, vstar, [&](std::uint64_t m) {
    const auto& t = transfer(m);
    out.parity.min_count = std::min(out.parity.min_count, t.contracted);
    out.parity.max_count = std::max(out.parity.max_count, t.contracted);
    if (t.contracted % 2) out.parity.all_even = false;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << t.sm.circles); ++s)
      if (auto r = type1(m, s)) {
        out.phi.add(r->second, from.index(m, s), r->first);
        out.type1++;
      }
  });

  // Type 2: flip (c1 -> A, c2 -> B) for every forced-B crossing c1 and the anchor c2.  A state y there
  // is lifted through the c2 saddle (Frobenius-dually), pushed through the c1 saddle to the forced
  // pattern, and sent on by Type 1.
  const int c2 = ctx.type2_anchor;
  std::vector<Term> terms;
  for (const auto& tc : ctx.touched) {
    if (tc.marker != 1 || c2 < 0) continue;
    const int c1 = tc.crossing;
    const std::uint64_t w = (vstar & ~cbit(n, c1)) | cbit(n, c2);
    detail::for_each_mask(ctx, w, [&](std::uint64_t m) {
      const std::uint64_t u = m & ~cbit(n, c2);
      const Smoothing sm = smooth(ctx.g, m), su = smooth(ctx.g, u), sv = smooth(ctx.g, u | cbit(n, c1));
      const int sgn_c2 = std::popcount(u >> (n - c2)) % 2 ? -1 : 1;
      const auto& x = ctx.g.X[c2];
      std::vector<int> tw, tu;
      for (int a : x) {
        if (std::find(tw.begin(), tw.end(), sm.circle_of_arc[a]) == tw.end()) tw.push_back(sm.circle_of_arc[a]);
        if (std::find(tu.begin(), tu.end(), su.circle_of_arc[a]) == tu.end()) tu.push_back(su.circle_of_arc[a]);
      }
      std::sort(tw.begin(), tw.end());
      std::sort(tu.begin(), tu.end());
      auto contracted_u = [&](int c) {
        for (int a = 0; a < ctx.g.arcs; ++a)
          if (su.circle_of_arc[a] == c && !ctx.band_arc[a]) return false;
        return true;
      };
      const int nc = sm.circles, ncu = su.circles;
      for (std::uint64_t s = 0; s < (std::uint64_t(1) << nc); ++s) {
        std::uint64_t xs = 0;
        for (int a = 0; a < ctx.g.arcs; ++a) {
          int cu = su.circle_of_arc[a];
          if (std::find(tu.begin(), tu.end(), cu) != tu.end()) continue;
          if (sign_minus(s, nc, sm.circle_of_arc[a])) xs |= sbit(ncu, cu);
        }
        for (int k = 0; k < ctx.g.free; ++k)
          if (sign_minus(s, nc, sm.crossing_circles + k)) xs |= sbit(ncu, su.crossing_circles + k);
        std::optional<std::uint64_t> lift;
        if (tu.size() == 2 && tw.size() == 1) {
          if (!sign_minus(s, nc, tw[0])) {
            lift = xs;
          } else {
            bool ca = contracted_u(tu[0]), cb = contracted_u(tu[1]);
            int minus = (cb && !ca) ? tu[0] : tu[1];
            lift = xs | sbit(ncu, minus);
          }
        } else if (tu.size() == 1 && tw.size() == 2) {
          bool m1 = sign_minus(s, nc, tw[0]), m2 = sign_minus(s, nc, tw[1]);
          if (!m1 && !m2) continue;
          lift = (m1 && m2) ? (xs | sbit(ncu, tu[0])) : xs;
        } else {
          throw IdentityError("Type 2 lift: crossing " + std::to_string(c2) + " neither merges nor splits");
        }
        terms.clear();
        saddle(ctx.g, u, su, *lift, c1, sv, terms);
        std::map<std::size_t, std::int64_t> acc;
        for (const auto& tm : terms)
          if (auto r = type1(tm.mask, tm.signs)) acc[r->second] += -std::int64_t(tm.coef) * r->first * sgn_c2;
        for (const auto& [row, v] : acc)
          if (v) {
            out.phi.add(row, from.index(m, s), v);
            out.type2++;
          }
      }
    });
  }
  out.phi.finalize();
  if (out.parity.min_count == INT32_MAX) out.parity.min_count = 0;
  return out;
}

// ---- the bicomplex ----

struct BicomplexColumn {
  Pairing s;
  int k = 0;
  CableDiagram ds;
  KhovanovComplex kc;
  std::size_t offset = 0;
};

struct BicomplexEdge {
  int from, to, sign;
  ContractionContext ctx;
  AnnulusMap map;
};

struct BicomplexData {
  Diagram diagram;
  ColorTuple n;
  BicomplexOptions opt;
  std::vector<BicomplexColumn> columns;
  std::vector<BicomplexEdge> edges;
  std::size_t dim = 0;
  std::vector<int> k_of, i_of, j_of;
  LinearMap d1;  // d'
  LinearMap d2;  // d''
};

inline BicomplexData build_bicomplex(const Diagram& d, const ColorTuple& n, const BicomplexOptions& opt = {}) {
  BicomplexData b;
  b.diagram = d;
  b.n = n;
  b.opt = opt;
  CableDiagram full = cable(d, n);
  PairingGraph g = pairing_graph(n, opt.above_smaller);
  std::map<std::pair<int, int>, int> col_of;
  for (int k = 0; k < int(g.grade.size()); ++k)
    for (int a = 0; a < int(g.grade[k].size()); ++a) {
      BicomplexColumn c;
      c.s = g.grade[k][a];
      c.k = k;
      c.ds = subcable(full, c.s);
      c.kc = khovanov_complex(c.ds.diagram, opt.cap);
      c.offset = b.dim;
      b.dim += c.kc.space.size();
      col_of[{k, a}] = int(b.columns.size());
      b.columns.push_back(std::move(c));
    }
  for (const auto& c : b.columns)
    for (std::size_t x = 0; x < c.kc.space.size(); ++x) {
      b.k_of.push_back(c.k);
      b.i_of.push_back(c.kc.i_of(x));
      b.j_of.push_back(c.kc.j_of(x));
    }
  b.d2 = LinearMap(b.dim, b.dim);
  for (const auto& c : b.columns) {
    const int sg = c.k % 2 ? -1 : 1;
    for (std::size_t x = 0; x < c.kc.d.cols; ++x)
      for (const auto& [r, v] : c.kc.d.col[x]) b.d2.add(c.offset + r, c.offset + x, sg * v);
  }
  b.d2.finalize();
  b.d1 = LinearMap(b.dim, b.dim);
  for (const auto& e : g.edges) {
    BicomplexEdge be;
    be.from = col_of.at({e.k, e.from});
    be.to = col_of.at({e.k + 1, e.to});
    be.sign = e.sign;
    const auto& cf = b.columns[be.from];
    const auto& ct = b.columns[be.to];
    be.ctx = classify_contraction(full, cf.s, ct.s, opt.flip_a);
    be.map = annulus_map(be.ctx, cf.kc.space, ct.kc.space);
    for (std::size_t x = 0; x < be.map.phi.cols; ++x)
      for (const auto& [r, v] : be.map.phi.col[x]) b.d1.add(ct.offset + r, cf.offset + x, be.sign * v);
    b.edges.push_back(std::move(be));
  }
  b.d1.finalize();
  return b;
}

inline LaurentPoly bigraded_euler(const BicomplexData& b) {
  LaurentPoly p('q');
  for (std::size_t x = 0; x < b.dim; ++x) p.add(b.j_of[x], (b.k_of[x] + b.i_of[x]) % 2 ? -1 : 1);
  return p;
}

struct IdentityStatus {
  bool ok = true;
  std::string witness;
};

struct BicomplexReport {
  IdentityStatus d1_squared, d2_squared, anticommute, chain_maps, i_preserved, euler;
  std::vector<ParityReport> parity;
  bool monomial = true;  // phi sends basis vectors to +-basis vectors or 0
  LaurentPoly bigraded{'q'}, colored{'q'};
  bool all_ok() const {
    return d1_squared.ok && d2_squared.ok && anticommute.ok && chain_maps.ok && i_preserved.ok && euler.ok;
  }
};

inline std::string describe_global(const BicomplexData& b, std::size_t x) {
  auto it = std::upper_bound(b.columns.begin(), b.columns.end(), x,
                             [](std::size_t v, const BicomplexColumn& c) { return v < c.offset; });
  const auto& c = *(it - 1);
  return "column " + c.s.str() + " state [" + describe_state(c.kc.space, x - c.offset) + "]";
}

inline BicomplexReport verify_bicomplex(const BicomplexData& b, std::uint64_t cap = kDefaultCap) {
  BicomplexReport r;
  auto fail = [&](IdentityStatus& st, const std::optional<Witness>& w, const char* what) {
    if (!w) return;
    st.ok = false;
    st.witness = std::string(what) + ": from " + describe_global(b, w->col) + " to " + describe_global(b, w->row) +
                 " coefficient " + std::to_string(w->value);
  };
  fail(r.d1_squared, composition_witness(b.d1, b.d1), "d'd' != 0");
  fail(r.d2_squared, composition_witness(b.d2, b.d2), "d''d'' != 0");
  fail(r.anticommute, composition_witness(b.d2, b.d1, &b.d1, &b.d2, 1), "d''d' + d'd'' != 0");
  for (const auto& e : b.edges) {
    const auto& cf = b.columns[e.from];
    const auto& ct = b.columns[e.to];
    if (r.chain_maps.ok) {
      auto w = composition_witness(ct.kc.d, e.map.phi, &e.map.phi, &cf.kc.d, -1);
      if (w) {
        r.chain_maps.ok = false;
        r.chain_maps.witness = "edge " + e.ctx.s.str() + " -> " + e.ctx.s2.str() + ": d phi != phi d at [" +
                               describe_state(cf.kc.space, w->col) + "]";
      }
    }
    for (std::size_t x = 0; x < e.map.phi.cols && r.i_preserved.ok; ++x) {
      if (e.map.phi.col[x].size() > 1) r.monomial = false;
      for (const auto& [row, v] : e.map.phi.col[x]) {
        if (v != 1 && v != -1) r.monomial = false;
        if (cf.kc.i_of(x) != ct.kc.i_of(row)) {
          r.i_preserved.ok = false;
          r.i_preserved.witness = "edge " + e.ctx.s.str() + " -> " + e.ctx.s2.str() + " shifts i at [" +
                                  describe_state(cf.kc.space, x) + "]";
        }
      }
    }
    r.parity.push_back(e.map.parity);
  }
  r.bigraded = bigraded_euler(b);
  r.colored = colored_jones(b.diagram, b.n, cap);
  if (!(r.bigraded == r.colored)) {
    r.euler.ok = false;
    r.euler.witness = "bigraded Euler " + r.bigraded.str() + " != colored Jones " + r.colored.str();
  }
  return r;
}

// Homology of the total complex (d' + d'') in each total degree k + i.
inline std::map<int, HomologySummary> total_homology(const BicomplexData& b) {
  LinearMap D(b.dim, b.dim);
  for (const LinearMap* m : {&b.d1, &b.d2})
    for (std::size_t x = 0; x < m->cols; ++x)
      for (const auto& [r, v] : m->col[x]) D.add(r, x, v);
  D.finalize();
  std::map<int, std::vector<std::size_t>> deg;
  for (std::size_t x = 0; x < b.dim; ++x) deg[b.k_of[x] + b.i_of[x]].push_back(x);
  static const std::vector<std::size_t> none;
  auto get = [&](int t) -> const std::vector<std::size_t>& {
    auto it = deg.find(t);
    return it == deg.end() ? none : it->second;
  };
  std::map<int, HomologySummary> out;
  for (const auto& [t, basis] : deg) {
    HomologySummary h = homology_at(D.block(get(t + 1), basis), D.block(basis, get(t - 1)));
    if (!h.trivial()) out[t] = h;
  }
  return out;
}

}  // namespace khovacable
