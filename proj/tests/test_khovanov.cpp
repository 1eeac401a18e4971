#include <gtest/gtest.h>

#include <khovacable/khovanov.hpp>
#include <khovacable/polyoracle.hpp>

#include "common.hpp"

using namespace khovacable;
using testutil::corpus;

namespace {

using Table = std::map<std::pair<int, int>, std::string>;

Table table(const Diagram& d) {
  Table t;
  for (const auto& [ij, h] : homology(khovanov_complex(d)))
    if (!h.trivial()) t[ij] = h.str();
  return t;
}

// Cables of every corpus diagram with at most 12 crossings and colors up to 2.
std::vector<std::pair<std::string, Diagram>> small_cables() {
  std::vector<std::pair<std::string, Diagram>> out;
  for (const char* name : {"unknot-0", "unknot-kink+", "unknot-kink-", "hopf", "trefoil-r", "trefoil-l", "figure8"}) {
    Diagram d = corpus(name);
    std::vector<ColorTuple> tuples;
    if (d.components == 1) tuples = {{1}, {2}};
    else tuples = {{1, 1}, {2, 1}, {1, 2}, {2, 2}, {2, 0}};
    for (const auto& n : tuples) {
      Diagram c = cable(d, n).diagram;
      if (c.crossings.size() > 12) continue;
      std::string label = std::string(name) + " (";
      for (size_t i = 0; i < n.size(); ++i) label += (i ? "," : "") + std::to_string(n[i]);
      out.emplace_back(label + ")", c);
    }
  }
  return out;
}

}  // namespace

TEST(Khovanov, DifferentialSquaresToZero) {
  for (const auto& [label, d] : small_cables()) {
    KhovanovComplex kc = khovanov_complex(d);
    EXPECT_EQ(d_squared_witness(kc), "") << label;
    EXPECT_EQ(grading_witness(kc), "") << label;
  }
}

TEST(Khovanov, EulerCharacteristicIsJones) {
  for (const auto& [label, d] : small_cables()) EXPECT_EQ(graded_euler(khovanov_complex(d)), jones(d)) << label;
}

TEST(Khovanov, HomologyEulerCharacteristicIsJones) {
  // Torsion does not contribute, so the free ranks alone recover the Jones polynomial.
  for (const char* name : {"trefoil-r", "figure8", "hopf"}) {
    Diagram d = corpus(name);
    LaurentPoly chi('q');
    for (const auto& [ij, h] : homology(khovanov_complex(d)))
      chi.add(ij.second, Int(long(h.betti)) * (ij.first % 2 ? -1 : 1));
    EXPECT_EQ(chi, jones(d)) << name;
  }
}

TEST(Khovanov, TrefoilHomology) {
  EXPECT_EQ(table(corpus("trefoil-r")), (Table{{{0, 1}, "1"}, {{0, 3}, "1"}, {{2, 5}, "1"}, {{3, 7}, "Z/2"}, {{3, 9}, "1"}}));
  EXPECT_EQ(table(corpus("trefoil-l")),
            (Table{{{0, -1}, "1"}, {{0, -3}, "1"}, {{-2, -5}, "1"}, {{-2, -7}, "Z/2"}, {{-3, -9}, "1"}}));
}

TEST(Khovanov, FigureEightHomology) {
  EXPECT_EQ(table(corpus("figure8")), (Table{{{-2, -5}, "1"},
                                             {{-1, -3}, "Z/2"},
                                             {{-1, -1}, "1"},
                                             {{0, -1}, "1"},
                                             {{0, 1}, "1"},
                                             {{1, 1}, "1"},
                                             {{2, 3}, "Z/2"},
                                             {{2, 5}, "1"}}));
}

TEST(Khovanov, HopfHomology) {
  EXPECT_EQ(table(corpus("hopf")), (Table{{{0, 0}, "1"}, {{0, 2}, "1"}, {{2, 4}, "1"}, {{2, 6}, "1"}}));
}

TEST(Khovanov, KinksAreInvisible) {
  Table unknot{{{0, -1}, "1"}, {{0, 1}, "1"}};
  EXPECT_EQ(table(unknot_diagram()), unknot);
  EXPECT_EQ(table(corpus("unknot-kink+")), unknot);
  EXPECT_EQ(table(corpus("unknot-kink-")), unknot);
}

TEST(Khovanov, StateEnumeration) {
  Diagram d = corpus("trefoil-r");
  auto states = enumerate_states(d);
  KhovanovComplex kc = khovanov_complex(d);
  ASSERT_EQ(states.size(), kc.space.size());
  // all-A state of the right trefoil has two circles; its all-plus enhancement sits at (0, 3 + 2)
  EXPECT_EQ(states.front().markers, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(states.front().signs, (std::vector<int>{1, 1}));
  EXPECT_EQ(states.front().i, 0);
  EXPECT_EQ(states.front().j, 5);
  for (std::size_t x = 0; x < states.size(); ++x) {
    int r = int(std::count(states[x].markers.begin(), states[x].markers.end(), -1));
    int tau = std::accumulate(states[x].signs.begin(), states[x].signs.end(), 0);
    EXPECT_EQ(states[x].i, r - d.negative_crossings());
    EXPECT_EQ(states[x].j, tau + r + d.positive_crossings() - 2 * d.negative_crossings());
    EXPECT_EQ(kc.i_of(x), states[x].i);
    EXPECT_EQ(kc.j_of(x), states[x].j);
  }
}

TEST(Khovanov, DifferentialEntriesAreUnits) {
  KhovanovComplex kc = khovanov_complex(cable(corpus("trefoil-r"), {2}).diagram);
  for (const auto& c : kc.d.col)
    for (const auto& [r, v] : c) ASSERT_TRUE(v == 1 || v == -1);
}

TEST(Khovanov, CapIsEnforced) {
  Diagram d = cable(corpus("trefoil-r"), {2}).diagram;
  EXPECT_THROW(khovanov_complex(d, 1000), CapExceeded);
  try {
    khovanov_complex(d, 1000);
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.cap, 1000u);
    EXPECT_GT(e.required, 1000u);
  }
}
