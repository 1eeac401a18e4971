// khovacable command-line front end.
//
// Exit codes: 0 success, 1 input error, 2 identity failure, 3 state-space cap exceeded.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <khovacable/bicomplex.hpp>
#include <khovacable/diagram.hpp>
#include <khovacable/khovanov.hpp>
#include <khovacable/pairing.hpp>
#include <khovacable/polyoracle.hpp>

using namespace khovacable;
using ojson = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string input;
  std::string colors;
  bool table = false;
  std::uint64_t cap = 0;
  std::string strand_order = "leftmost";
  std::string above = "smaller";
  std::string a_reading = "a1";
};

ColorTuple parse_colors(const std::string& s, int components) {
  ColorTuple n;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw InputError("");
      n.push_back(v);
    } catch (...) {
      throw InputError("bad color tuple \"" + s + "\"");
    }
  }
  if (n.empty()) throw InputError("empty color tuple");
  if (components >= 0 && int(n.size()) == 1 && components > 1) n.assign(components, n[0]);
  if (components >= 0 && int(n.size()) != components)
    throw InputError("color tuple has " + std::to_string(n.size()) + " entries, diagram has " +
                     std::to_string(components) + " components");
  return n;
}

std::string homology_table(const std::map<std::pair<int, int>, HomologySummary>& h) {
  std::set<int> is, js;
  for (const auto& [ij, s] : h) is.insert(ij.first), js.insert(ij.second);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"i\\j"};
  for (int j : js) head.push_back(std::to_string(j));
  cells.push_back(head);
  for (int i : is) {
    std::vector<std::string> row{std::to_string(i)};
    for (int j : js) {
      auto it = h.find({i, j});
      row.push_back(it == h.end() ? "." : it->second.str());
    }
    cells.push_back(row);
  }
  std::vector<size_t> width(head.size(), 0);
  for (const auto& r : cells)
    for (size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::string out;
  for (const auto& r : cells) {
    for (size_t c = 0; c < r.size(); ++c) {
      out += std::string(width[c] - r[c].size() + (c ? 2 : 0), ' ') + r[c];
    }
    out += "\n";
  }
  return out;
}

ojson torsion_json(const HomologySummary& h) {
  ojson t = ojson::array();
  for (const auto& x : h.torsion) t.push_back(x.get_str());
  return t;
}

void emit(const RunConfig& cfg, const ojson& j, const std::string& table) {
  if (cfg.table) std::cout << table;
  else std::cout << j.dump(2) << "\n";
}

BicomplexOptions options(const RunConfig& cfg) {
  BicomplexOptions o;
  o.above_smaller = cfg.above == "smaller";
  o.flip_a = cfg.a_reading == "a2";
  o.cap = cfg.cap;
  return o;
}

int run_jones(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  LaurentPoly p = jones(d, cfg.cap);
  emit(cfg, ojson{{"command", "jones"}, {"writhe", d.writhe()}, {"jones", p.to_json()}}, p.str() + "\n");
  return 0;
}

int run_colored(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  ColorTuple n = parse_colors(cfg.colors, d.components);
  LaurentPoly p = colored_jones(d, n, cfg.cap);
  emit(cfg, ojson{{"command", "colored-jones"}, {"colors", n}, {"colored_jones", p.to_json()}}, p.str() + "\n");
  return 0;
}

int run_cable(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  ColorTuple n = parse_colors(cfg.colors, d.components);
  CableDiagram c = cable(d, n);
  ojson strands = ojson::array();
  for (const auto& s : c.strand_of) strands.push_back({s.component + 1, s.strand});
  ojson j{{"command", "cable"},
          {"colors", n},
          {"crossings", c.diagram.crossings.size()},
          {"components", c.diagram.components},
          {"writhe", c.diagram.writhe()},
          {"strands", strands},
          {"diagram", ojson::parse(serialize(c.diagram))}};
  std::string t = "crossings " + std::to_string(c.diagram.crossings.size()) + ", components " +
                  std::to_string(c.diagram.components) + ", writhe " + std::to_string(c.diagram.writhe()) + "\n" +
                  serialize(c.diagram);
  emit(cfg, j, t);
  return 0;
}

int run_khovanov(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  if (!cfg.colors.empty()) d = cable(d, parse_colors(cfg.colors, d.components)).diagram;
  KhovanovComplex kc = khovanov_complex(d, cfg.cap);
  std::string w = d_squared_witness(kc);
  auto h = w.empty() ? homology(kc) : std::map<std::pair<int, int>, HomologySummary>{};
  ojson rows = ojson::array();
  for (const auto& [ij, s] : h)
    rows.push_back({{"i", ij.first}, {"j", ij.second}, {"rank", s.betti}, {"torsion", torsion_json(s)}});
  ojson j{{"command", "khovanov"}, {"states", kc.space.size()}, {"d_squared", w.empty() ? "ok" : w}, {"homology", rows}};
  emit(cfg, j, w.empty() ? homology_table(h) : "d^2 failed: " + w + "\n");
  return w.empty() ? 0 : 2;
}

int run_pairings(const RunConfig& cfg) {
  int comps = -1;
  if (!cfg.input.empty()) comps = load_diagram(cfg.input).components;
  ColorTuple n = parse_colors(cfg.colors, comps);
  PairingGraph g;
  std::string err;
  try {
    g = pairing_complex(n, cfg.above == "smaller");
  } catch (const IdentityError& e) {
    err = e.what();
    g = pairing_graph(n, cfg.above == "smaller");
  }
  ojson ranks = ojson::array();
  std::string t;
  for (size_t k = 0; k < g.grade.size(); ++k) {
    ranks.push_back(g.grade[k].size());
    t += "F^" + std::to_string(k) + ": rank " + std::to_string(g.grade[k].size()) + "\n";
  }
  ojson graph = ojson::parse(g.to_json().dump());
  ojson j{{"command", "pairings"}, {"colors", n}, {"ranks", ranks}, {"d_squared", err.empty() ? "ok" : err}, {"graph", graph}};
  t += std::string("d_n^2=") + (err.empty() ? "ok" : "FAILED " + err) + "\n";
  emit(cfg, j, t);
  return err.empty() ? 0 : 2;
}

std::string status(const IdentityStatus& s) { return s.ok ? "ok" : "FAILED"; }

int run_bicomplex_verify(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  ColorTuple n = parse_colors(cfg.colors, d.components);
  BicomplexData b;
  try {
    b = build_bicomplex(d, n, options(cfg));
  } catch (const IdentityError& e) {
    ojson j{{"command", "bicomplex-verify"}, {"colors", n}, {"error", e.what()}};
    emit(cfg, j, std::string("construction failed: ") + e.what() + "\n");
    return 2;
  }
  BicomplexReport r = verify_bicomplex(b, cfg.cap);
  std::string summary = "d'2=" + status(r.d1_squared) + " d''2=" + status(r.d2_squared) +
                        " anticommute=" + status(r.anticommute) + " euler=" + status(r.euler);
  ojson ids = ojson::object();
  auto put = [&](const char* name, const IdentityStatus& s) {
    ids[name] = s.ok ? ojson("ok") : ojson{{"status", "failed"}, {"witness", s.witness}};
  };
  put("d'2", r.d1_squared);
  put("d''2", r.d2_squared);
  put("anticommute", r.anticommute);
  put("chain_map", r.chain_maps);
  put("i_preserved", r.i_preserved);
  put("euler", r.euler);
  ojson blocks = ojson::array();
  std::map<std::pair<int, int>, std::size_t> dims;
  for (std::size_t x = 0; x < b.dim; ++x) dims[{b.k_of[x], b.i_of[x]}]++;
  for (const auto& [ki, v] : dims) blocks.push_back({{"k", ki.first}, {"i", ki.second}, {"dim", v}});
  ojson edges = ojson::array();
  for (const auto& e : b.edges) {
    ojson touched = ojson::array();
    for (const auto& t : e.ctx.touched)
      touched.push_back({{"crossing", t.crossing}, {"type", touch_name(t.type)}, {"marker", t.marker ? "-" : "+"}});
    edges.push_back({{"from", e.ctx.s.str()},
                     {"to", e.ctx.s2.str()},
                     {"sign", e.sign},
                     {"type1_states", e.map.type1},
                     {"type2_states", e.map.type2},
                     {"contracted_crossings", touched}});
  }
  ojson parity = ojson::array();
  for (const auto& p : r.parity)
    parity.push_back({{"edge", p.edge},
                      {"degenerate", p.degenerate},
                      {"contracted_circles_min", p.min_count},
                      {"contracted_circles_max", p.max_count},
                      {"even", p.all_even}});
  ojson j{{"command", "bicomplex-verify"},
          {"colors", n},
          {"summary", summary},
          {"identities", ids},
          {"phi_monomial", r.monomial},
          {"bigraded_euler", r.bigraded.to_json()},
          {"colored_jones", r.colored.to_json()},
          {"blocks", blocks},
          {"edges", edges},
          {"parity", parity}};
  std::string t = summary + "\n";
  for (const auto* s : {&r.d1_squared, &r.d2_squared, &r.anticommute, &r.chain_maps, &r.i_preserved, &r.euler})
    if (!s->ok) t += "  " + s->witness + "\n";
  t += "bigraded euler: " + r.bigraded.str() + "\n";
  for (const auto& [ki, v] : dims)
    t += "  C^{" + std::to_string(ki.first) + "," + std::to_string(ki.second) + "}: " + std::to_string(v) + "\n";
  emit(cfg, j, t);
  return r.all_ok() ? 0 : 2;
}

int run_total_homology(const RunConfig& cfg) {
  Diagram d = load_diagram(cfg.input);
  ColorTuple n = parse_colors(cfg.colors, d.components);
  BicomplexData b = build_bicomplex(d, n, options(cfg));
  BicomplexReport r = verify_bicomplex(b, cfg.cap);
  if (!(r.d1_squared.ok && r.d2_squared.ok && r.anticommute.ok)) {
    emit(cfg, ojson{{"command", "total-homology"}, {"error", "not a bicomplex"}}, "not a bicomplex\n");
    return 2;
  }
  auto h = total_homology(b);
  ojson rows = ojson::array();
  std::string t;
  for (const auto& [deg, s] : h) {
    rows.push_back({{"degree", deg}, {"rank", s.betti}, {"torsion", torsion_json(s)}});
    t += "H^" + std::to_string(deg) + " = " + s.str() + "\n";
  }
  emit(cfg, ojson{{"command", "total-homology"}, {"colors", n}, {"homology", rows}}, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"khovacable: Khovanov bicomplex for the colored Jones polynomial"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_flag("--table", cfg.table, "human-readable output instead of JSON");
  app.add_option("--cap", cfg.cap, "state-space cap (overrides KHOVACABLE_CAP)");
  app.add_option("--strand-order", cfg.strand_order, "strand numbering convention")->check(CLI::IsMember({"leftmost"}));
  app.add_option("--above", cfg.above, "which lines count as above in the pairing sign")
      ->check(CLI::IsMember({"smaller", "larger"}));
  app.add_option("--a-reading", cfg.a_reading, "reading of (a)-type contracted crossings")
      ->check(CLI::IsMember({"a1", "a2"}));

  auto with_file = [&](const char* name, const char* help, bool colors, bool colors_required) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", cfg.input, "PD-code JSON document")->required();
    if (colors) {
      auto* o = sub->add_option("--colors", cfg.colors, "color tuple, e.g. 2 or 2,1");
      if (colors_required) o->required();
    }
    return sub;
  };
  auto* jones_cmd = with_file("jones", "unnormalized Jones polynomial", false, false);
  auto* cj_cmd = with_file("colored-jones", "colored Jones polynomial via the cabling formula", true, true);
  auto* cable_cmd = with_file("cable", "n-cable diagram", true, true);
  auto* kh_cmd = with_file("khovanov", "Khovanov homology table (of the cable if --colors is given)", true, false);
  auto* pair_cmd = app.add_subcommand("pairings", "pairing graph and its complex");
  pair_cmd->add_option("file", cfg.input, "optional diagram, for the component count");
  pair_cmd->add_option("--colors", cfg.colors, "color tuple")->required();
  auto* bv_cmd = with_file("bicomplex-verify", "bicomplex identities and Euler cross-check", true, true);
  auto* th_cmd = with_file("total-homology", "homology of the total complex", true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cfg.cap == 0) cfg.cap = cap_from_env();
    if (jones_cmd->parsed()) return run_jones(cfg);
    if (cj_cmd->parsed()) return run_colored(cfg);
    if (cable_cmd->parsed()) return run_cable(cfg);
    if (kh_cmd->parsed()) return run_khovanov(cfg);
    if (pair_cmd->parsed()) return run_pairings(cfg);
    if (bv_cmd->parsed()) return run_bicomplex_verify(cfg);
    if (th_cmd->parsed()) return run_total_homology(cfg);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IdentityError& e) {
    std::cerr << "identity failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
