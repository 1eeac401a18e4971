// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <khovacable/bicomplex.hpp>
#include <khovacable/intlinalg.hpp>
#include <khovacable/khovanov.hpp>
#include <khovacable/pairing.hpp>
#include <khovacable/polyoracle.hpp>

using namespace khovacable;

namespace {

const std::vector<std::string> kCorpus{"unknot-0", "unknot-kink+", "unknot-kink-", "hopf",
                                       "trefoil-r", "trefoil-l",   "figure8"};

Diagram corpus(const std::string& name) { return load_diagram(std::string(KHOVACABLE_CORPUS_DIR) + "/" + name + ".json"); }

std::string tuple_str(const ColorTuple& n) {
  std::string s = "(";
  for (size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct Instance {
  std::string name;
  ColorTuple n;
  Diagram diagram;
};

// Every diagram of criterion 1: the corpus diagrams and their cables with colors <= 2 per component.
std::vector<Instance> khovanov_instances(int& skipped) {
  std::vector<Instance> out;
  skipped = 0;
  for (const auto& name : kCorpus) {
    Diagram d = corpus(name);
    std::vector<ColorTuple> tuples{ColorTuple(d.components, 0)};
    for (int c = 0; c < d.components; ++c) {
      std::vector<ColorTuple> next;
      for (const auto& t : tuples)
        for (int v = 0; v <= 2; ++v) {
          next.push_back(t);
          next.back()[c] = v;
        }
      tuples = std::move(next);
    }
    for (const auto& n : tuples) {
      Diagram c = cable(d, n).diagram;
      if (c.crossings.size() > 12) {
        ++skipped;
        continue;
      }
      out.push_back({name, n, c});
    }
  }
  return out;
}

struct BicomplexInstance {
  std::string name;
  ColorTuple n;
};

const std::vector<BicomplexInstance> kBicomplexSet{{"unknot-0", {2}},     {"unknot-kink+", {2}}, {"unknot-kink-", {2}},
                                                   {"trefoil-r", {2}},    {"trefoil-l", {2}},    {"unknot-0", {3}},
                                                   {"unknot-0", {4}}};

struct Built {
  BicomplexInstance inst;
  BicomplexData data;
  BicomplexReport report;
  double seconds = 0;
};

std::vector<Built>& bicomplexes() {
  static std::vector<Built> built = [] {
    std::vector<Built> v;
    for (const auto& inst : kBicomplexSet) {
      auto t0 = std::chrono::steady_clock::now();
      Built b{inst, build_bicomplex(corpus(inst.name), inst.n), {}, 0};
      b.report = verify_bicomplex(b.data);
      b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      v.push_back(std::move(b));
    }
    return v;
  }();
  return built;
}

Outcome criterion1() {
  int skipped = 0;
  auto t0 = std::chrono::steady_clock::now();
  auto inst = khovanov_instances(skipped);
  Outcome o;
  for (const auto& x : inst) {
    std::string w = d_squared_witness(khovanov_complex(x.diagram));
    if (!w.empty()) o.fail(x.name + " " + tuple_str(x.n) + ": " + w);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) {
    std::ostringstream s;
    s << inst.size() << " diagrams, " << skipped << " cables over 12 crossings skipped, " << secs << " s";
    o.detail = s.str();
  }
  return o;
}

Outcome criterion2() {
  int skipped = 0;
  Outcome o;
  auto inst = khovanov_instances(skipped);
  for (const auto& x : inst) {
    LaurentPoly chi = graded_euler(khovanov_complex(x.diagram)), j = jones(x.diagram);
    if (!(chi == j)) o.fail(x.name + " " + tuple_str(x.n) + ": euler " + chi.str() + " vs jones " + j.str());
  }
  if (o.pass) o.detail = std::to_string(inst.size()) + " diagrams";
  return o;
}

Outcome criterion3() {
  Outcome o;
  int tuples = 0;
  std::function<void(ColorTuple&, int)> rec = [&](ColorTuple& cur, int left) {
    if (!cur.empty()) {
      ++tuples;
      try {
        pairing_complex(cur);
      } catch (const IdentityError& e) {
        o.fail(tuple_str(cur) + ": " + e.what());
      }
      for (const auto& k : all_kvectors(cur))
        if (Int(long(enumerate_pairings(cur, k).size())) != binom_tuple(cur, k))
          o.fail(tuple_str(cur) + ": |I_k| differs from the binomial product");
    }
    for (int v = 1; v <= left; ++v) {
      cur.push_back(v);
      rec(cur, left - v);
      cur.pop_back();
    }
  };
  ColorTuple cur;
  rec(cur, 8);
  for (const ColorTuple& n : {ColorTuple{2, 2}, ColorTuple{3, 2}}) {
    try {
      pairing_complex(n);
    } catch (const IdentityError& e) {
      o.fail(tuple_str(n) + ": " + e.what());
    }
  }
  if (o.pass) o.detail = std::to_string(tuples) + " color tuples";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t edges = 0;
  for (const auto& b : bicomplexes()) {
    edges += b.data.edges.size();
    if (!b.report.chain_maps.ok) o.fail(b.inst.name + " " + tuple_str(b.inst.n) + ": " + b.report.chain_maps.witness);
    if (!b.report.i_preserved.ok) o.fail(b.inst.name + " " + tuple_str(b.inst.n) + ": " + b.report.i_preserved.witness);
  }
  if (o.pass) o.detail = std::to_string(edges) + " edges over " + std::to_string(bicomplexes().size()) + " instances";
  return o;
}

Outcome criterion5() {
  Outcome o;
  double slowest = 0;
  for (const auto& b : bicomplexes()) {
    const auto& r = b.report;
    std::string tag = b.inst.name + " " + tuple_str(b.inst.n) + ": ";
    if (!r.d1_squared.ok) o.fail(tag + r.d1_squared.witness);
    if (!r.d2_squared.ok) o.fail(tag + r.d2_squared.witness);
    if (!r.anticommute.ok) o.fail(tag + r.anticommute.witness);
    if (b.inst.name.rfind("trefoil", 0) == 0 && b.seconds >= 600) o.fail(tag + "took " + std::to_string(b.seconds) + " s");
    slowest = std::max(slowest, b.seconds);
  }
  if (o.pass) {
    std::ostringstream s;
    s << bicomplexes().size() << " instances, slowest " << slowest << " s";
    o.detail = s.str();
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  LaurentPoly want('q');
  want.add(2, 1), want.add(0, 1), want.add(-2, 1);
  if (!(colored_jones(unknot_diagram(), {2}) == want)) o.fail("colored_jones(unknot, 2) != q^2 + 1 + q^-2");
  int checked = 0;
  for (const auto& b : bicomplexes()) {
    ++checked;
    if (!b.report.euler.ok) o.fail(b.inst.name + " " + tuple_str(b.inst.n) + ": " + b.report.euler.witness);
  }
  if (o.pass) o.detail = std::to_string(checked) + " instances plus the unknot J_2 value";
  return o;
}

Outcome criterion7() {
  Outcome o;
  int even = 0, degenerate = 0;
  std::string deg_note;
  for (const auto& b : bicomplexes())
    for (const auto& p : b.report.parity) {
      if (p.degenerate) {
        ++degenerate;
        deg_note = "contracted circles " + std::to_string(p.min_count) + ".." + std::to_string(p.max_count);
        continue;
      }
      if (!p.all_even)
        o.fail(b.inst.name + " " + tuple_str(b.inst.n) + " edge " + p.edge + ": odd contracted circle count");
      else
        ++even;
    }
  if (o.pass)
    o.detail = std::to_string(even) + " crossing-bearing edges even; " + std::to_string(degenerate) +
               " degenerate 0-crossing edges reported only (" + deg_note + ")";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937 rng(8);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    std::size_t rows = 1 + rng() % 50, cols = 1 + rng() % 50;
    double density = 0.02 + 0.2 * (rng() % 100) / 100.0;
    std::bernoulli_distribution keep(density);
    std::uniform_int_distribution<int> val(-9, 9);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (keep(rng)) m.add(i, j, val(rng));
    m.normalize();
    SmithResult r = smith_normal_form(m);
    if (!(r.U * m * r.V == r.S)) o.fail("trial " + std::to_string(trial) + ": U m V != S");
    if (abs(determinant(r.U)) != 1 || abs(determinant(r.V)) != 1)
      o.fail("trial " + std::to_string(trial) + ": transform not unimodular");
    for (const auto& e : r.S.entries())
      if (e.row != e.col) o.fail("trial " + std::to_string(trial) + ": S not diagonal");
    for (size_t i = 0; i + 1 < r.diagonal.size(); ++i)
      if (r.diagonal[i + 1] % r.diagonal[i] != 0) o.fail("trial " + std::to_string(trial) + ": divisibility chain broken");
  }
  int order2 = 0, other = 0;
  for (const auto& [ij, h] : homology(khovanov_complex(corpus("trefoil-r"))))
    for (const auto& t : h.torsion) (t == 2 ? order2 : other)++;
  if (order2 != 1 || other != 0)
    o.fail("trefoil torsion: " + std::to_string(order2) + " classes of order 2, " + std::to_string(other) + " others");
  if (o.pass) o.detail = "1000 matrices; trefoil torsion Z/2 only";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 Khovanov d^2 = 0", criterion1},
      {"2 Euler characteristic = Jones", criterion2},
      {"3 pairing complex d_n^2 = 0 and |I_k|", criterion3},
      {"4 annulus maps are chain maps", criterion4},
      {"5 d'^2 = d''^2 = d'd'' + d''d' = 0", criterion5},
      {"6 bigraded Euler = colored Jones", criterion6},
      {"7 contracted circle parity", criterion7},
      {"8 Smith normal form", criterion8},
  };
  int failed = 0;
  for (const auto& [label, run] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s  %-40s  %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", label, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
