#include <gtest/gtest.h>

#include <khovacable/bicomplex.hpp>

#include "common.hpp"

using namespace khovacable;
using testutil::corpus;
using testutil::poly;

namespace {

struct Case {
  const char* name;
  ColorTuple n;
};

const std::vector<Case> kCases{{"unknot-0", {2}},     {"unknot-0", {3}},  {"unknot-0", {4}}, {"unknot-kink+", {2}},
                               {"unknot-kink-", {2}}, {"trefoil-r", {2}}, {"trefoil-l", {2}}};

std::string label(const Case& c) { return std::string(c.name) + " n=" + std::to_string(c.n[0]); }

void expect_all_ok(const BicomplexReport& r, const std::string& what) {
  EXPECT_TRUE(r.d1_squared.ok) << what << ": " << r.d1_squared.witness;
  EXPECT_TRUE(r.d2_squared.ok) << what << ": " << r.d2_squared.witness;
  EXPECT_TRUE(r.anticommute.ok) << what << ": " << r.anticommute.witness;
  EXPECT_TRUE(r.chain_maps.ok) << what << ": " << r.chain_maps.witness;
  EXPECT_TRUE(r.i_preserved.ok) << what << ": " << r.i_preserved.witness;
  EXPECT_TRUE(r.euler.ok) << what << ": " << r.euler.witness;
  EXPECT_TRUE(r.monomial) << what;
}

}  // namespace

TEST(Bicomplex, IdentitiesHold) {
  for (const auto& c : kCases) {
    BicomplexData b = build_bicomplex(corpus(c.name), c.n);
    expect_all_ok(verify_bicomplex(b), label(c));
  }
}

TEST(Bicomplex, AlternativeConventions) {
  for (const auto& c : {Case{"unknot-0", {3}}, Case{"unknot-kink+", {2}}, Case{"trefoil-r", {2}}}) {
    BicomplexOptions larger;
    larger.above_smaller = false;
    expect_all_ok(verify_bicomplex(build_bicomplex(corpus(c.name), c.n, larger)), label(c) + " above=larger");
    BicomplexOptions flipped;
    flipped.flip_a = true;
    expect_all_ok(verify_bicomplex(build_bicomplex(corpus(c.name), c.n, flipped)), label(c) + " a-2");
  }
}

TEST(Bicomplex, ContractedCirclesAreEven) {
  for (const auto& c : kCases) {
    BicomplexReport r = verify_bicomplex(build_bicomplex(corpus(c.name), c.n));
    for (const auto& p : r.parity) {
      if (p.degenerate) continue;
      EXPECT_TRUE(p.all_even) << label(c) << " edge " << p.edge;
      EXPECT_EQ(p.min_count % 2, 0);
      EXPECT_EQ(p.max_count % 2, 0);
    }
  }
}

TEST(Bicomplex, AnnulusMapIsHomogeneousInQ) {
  // phi shifts the column-local j by a single amount per edge
  for (const auto& c : kCases) {
    BicomplexData b = build_bicomplex(corpus(c.name), c.n);
    for (const auto& e : b.edges) {
      const auto& from = b.columns[e.from].kc;
      const auto& to = b.columns[e.to].kc;
      std::set<int> shifts;
      for (std::size_t x = 0; x < e.map.phi.cols; ++x)
        for (const auto& [row, v] : e.map.phi.col[x]) shifts.insert(to.j_of(row) - from.j_of(x));
      EXPECT_EQ(shifts.size(), 1u) << label(c) << " edge " << e.ctx.s.str() << " -> " << e.ctx.s2.str();
    }
  }
}

TEST(Bicomplex, BigradedEulerIsColoredJones) {
  BicomplexData b = build_bicomplex(unknot_diagram(), {2});
  EXPECT_EQ(bigraded_euler(b), poly({{2, 1}, {0, 1}, {-2, 1}}));
  for (const auto& c : kCases) {
    Diagram d = corpus(c.name);
    EXPECT_EQ(bigraded_euler(build_bicomplex(d, c.n)), colored_jones(d, c.n)) << label(c);
  }
}

TEST(Bicomplex, UnknotTwoCableShape) {
  // Two parallel circles in column k = 0, the empty diagram in column k = 1.
  BicomplexData b = build_bicomplex(unknot_diagram(), {2});
  ASSERT_EQ(b.columns.size(), 2u);
  EXPECT_EQ(b.columns[0].kc.space.size(), 4u);
  EXPECT_EQ(b.columns[1].kc.space.size(), 1u);
  EXPECT_EQ(b.dim, 5u);
  ASSERT_EQ(b.edges.size(), 1u);
  const auto& phi = b.edges[0].map.phi;
  // only (+,+) survives the contraction of both circles
  EXPECT_EQ(phi.col[0].size(), 1u);
  for (std::size_t x = 1; x < 4; ++x) EXPECT_TRUE(phi.col[x].empty());
  EXPECT_TRUE(b.edges[0].map.parity.degenerate);
}

TEST(Bicomplex, TrefoilContractionTouchesEveryCrossing) {
  Diagram d = corpus("trefoil-r");
  CableDiagram full = cable(d, {2});
  Pairing empty{{{}}}, one{{{1}}};
  ContractionContext ctx = classify_contraction(full, empty, one, false);
  ASSERT_EQ(ctx.touched.size(), 12u);
  int forced_b = 0;
  for (const auto& t : ctx.touched) {
    EXPECT_EQ(t.type, TouchType::b);
    forced_b += t.marker;
  }
  EXPECT_EQ(forced_b, 6);
  EXPECT_TRUE(ctx.ds2.diagram.crossings.empty());
}

TEST(Bicomplex, ColumnsFollowThePairingGraph) {
  BicomplexData b = build_bicomplex(unknot_diagram(), {4});
  PairingGraph g = pairing_graph({4});
  std::size_t cols = 0;
  for (const auto& gr : g.grade) cols += gr.size();
  EXPECT_EQ(b.columns.size(), cols);
  EXPECT_EQ(b.edges.size(), g.edges.size());
  for (const auto& col : b.columns) EXPECT_EQ(col.ds.diagram.components + 2 * col.k, 4);
}

TEST(Bicomplex, VerifierCatchesTampering) {
  BicomplexData b = build_bicomplex(corpus("unknot-kink+"), {2});
  ASSERT_TRUE(verify_bicomplex(b).all_ok());
  BicomplexData broken = b;
  for (auto& c : broken.d1.col)
    if (!c.empty()) {
      c.front().second *= 2;
      break;
    }
  BicomplexReport r = verify_bicomplex(broken);
  EXPECT_FALSE(r.anticommute.ok);
  EXPECT_NE(r.anticommute.witness.find("column"), std::string::npos);

  BicomplexData bad_phi = b;
  for (auto& e : bad_phi.edges)
    for (auto& c : e.map.phi.col)
      if (!c.empty()) {
        c.clear();
        break;
      }
  EXPECT_FALSE(verify_bicomplex(bad_phi).chain_maps.ok);
}

TEST(Bicomplex, TotalHomologyEulerCharacteristic) {
  // At q = 1 the colored Jones polynomial of a knot is n + 1.
  for (const auto& c : {Case{"unknot-0", {2}}, Case{"unknot-0", {3}}, Case{"unknot-kink-", {2}}}) {
    BicomplexData b = build_bicomplex(corpus(c.name), c.n);
    long chi = 0;
    for (const auto& [deg, h] : total_homology(b)) chi += (deg % 2 ? -1 : 1) * long(h.betti);
    EXPECT_EQ(chi, c.n[0] + 1) << label(c);
  }
}

TEST(Bicomplex, CapIsEnforced) {
  BicomplexOptions opt;
  opt.cap = 1000;
  EXPECT_THROW(build_bicomplex(corpus("trefoil-r"), {2}, opt), CapExceeded);
}
