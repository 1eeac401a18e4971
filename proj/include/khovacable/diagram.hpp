#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace khovacable {

// Arc-end position: crossing index and slot 0..3 (counterclockwise, slot 0 = incoming under).
struct Slot {
  int crossing = -1;
  int slot = -1;
  auto operator<=>(const Slot&) const = default;
};

struct Crossing {
  std::array<int, 4> arcs{};
  int sign = 0;  // 0 = not given; filled in by orient()
  bool operator==(const Crossing&) const = default;
};

struct Diagram {
  int components = 0;
  std::vector<Crossing> crossings;
  std::vector<std::vector<int>> orientations;  // arcs of each component in travel order
  std::vector<int> base_edges;                 // 0 for crossing-free components
  std::vector<int> free_loops;                 // 1 iff the component is a crossing-free circle

  // derived by orient()
  std::map<int, int> arc_component;
  std::map<int, Slot> head;  // end where the arc runs into a crossing
  std::map<int, Slot> tail;

  int writhe() const {
    int w = 0;
    for (const auto& x : crossings) w += x.sign;
    return w;
  }
  int positive_crossings() const {
    return int(std::count_if(crossings.begin(), crossings.end(), [](const Crossing& x) { return x.sign > 0; }));
  }
  int negative_crossings() const { return int(crossings.size()) - positive_crossings(); }
  int total_free_loops() const { return std::accumulate(free_loops.begin(), free_loops.end(), 0); }
  int component_of_crossing_strand(int x, int slot) const { return arc_component.at(crossings[x].arcs[slot]); }

  bool same_input(const Diagram& o) const {
    return components == o.components && crossings == o.crossings && orientations == o.orientations &&
           base_edges == o.base_edges && free_loops == o.free_loops;
  }
};

namespace detail {

// Faces of the planar surface: the corner between slots s and s+1 of crossing x
// is followed by the corner at the far end of arc x[s+1].
inline void check_planar(const Diagram& d) {
  const int n = int(d.crossings.size());
  if (n == 0) return;
  std::map<int, std::vector<Slot>> ends;
  for (int x = 0; x < n; ++x)
    for (int s = 0; s < 4; ++s) ends[d.crossings[x].arcs[s]].push_back({x, s});
  auto other_end = [&](Slot e) {
    const auto& v = ends.at(d.crossings[e.crossing].arcs[e.slot]);
    return v[0] == e ? v[1] : v[0];
  };
  // connected pieces over crossings
  std::vector<int> piece(n);
  std::iota(piece.begin(), piece.end(), 0);
  auto find = [&](int a) {
    while (piece[a] != a) a = piece[a] = piece[piece[a]];
    return a;
  };
  for (const auto& [arc, v] : ends) piece[find(v[0].crossing)] = find(v[1].crossing);

  std::vector<char> seen(4 * n, 0);
  std::map<int, int> faces, verts;
  for (int x = 0; x < n; ++x) verts[find(x)]++;
  for (int x = 0; x < n; ++x)
    for (int s = 0; s < 4; ++s) {
      if (seen[4 * x + s]) continue;
      faces[find(x)]++;
      Slot c{x, s};
      while (!seen[4 * c.crossing + c.slot]) {
        seen[4 * c.crossing + c.slot] = 1;
        c = other_end({c.crossing, (c.slot + 1) % 4});
      }
    }
  for (const auto& [root, v] : verts) {
    int f = faces[root];
    if (v - 2 * v + f != 2)
      throw InputError("non-planar rotation data: piece containing crossing " + std::to_string(root) +
                       " has V-E+F = " + std::to_string(v - 2 * v + f));
  }
}

}  // namespace detail

// Validates a diagram and derives orientation data and crossing signs.
inline void orient(Diagram& d) {
  const int n = int(d.crossings.size());
  if (d.components < 0) throw InputError("negative component count");
  if (int(d.orientations.size()) != d.components)
    throw InputError("orientations: expected " + std::to_string(d.components) + " entries");
  if (d.free_loops.empty())
    for (const auto& o : d.orientations) d.free_loops.push_back(o.empty() ? 1 : 0);
  if (d.base_edges.empty())
    for (const auto& o : d.orientations) d.base_edges.push_back(o.empty() ? 0 : o.front());
  if (int(d.free_loops.size()) != d.components || int(d.base_edges.size()) != d.components)
    throw InputError("base_edges/free_loops must have one entry per component");

  std::map<int, int> mult;
  for (const auto& x : d.crossings) {
    for (int a : x.arcs) {
      if (a <= 0) throw InputError("arc labels must be positive integers");
      mult[a]++;
    }
    if (x.sign != 0 && x.sign != 1 && x.sign != -1) throw InputError("crossing sign must be +1 or -1");
  }
  for (const auto& [a, m] : mult)
    if (m != 2) throw InputError("arc multiplicity: arc " + std::to_string(a) + " appears " + std::to_string(m) + " times");

  d.arc_component.clear();
  for (int c = 0; c < d.components; ++c) {
    const auto& o = d.orientations[c];
    if (d.free_loops[c] != (o.empty() ? 1 : 0))
      throw InputError("component " + std::to_string(c) + ": free_loops must be 1 exactly when it has no arcs");
    for (int a : o) {
      if (!mult.count(a)) throw InputError("orientation inconsistency: arc " + std::to_string(a) + " is not used by any crossing");
      if (!d.arc_component.emplace(a, c).second)
        throw InputError("orientation inconsistency: arc " + std::to_string(a) + " listed twice");
    }
    if (!o.empty() && std::find(o.begin(), o.end(), d.base_edges[c]) == o.end())
      throw InputError("base edge of component " + std::to_string(c) + " is not one of its arcs");
    if (o.empty() && d.base_edges[c] != 0) throw InputError("crossing-free component cannot have a base edge");
  }
  for (const auto& [a, m] : mult)
    if (!d.arc_component.count(a)) throw InputError("orientation inconsistency: arc " + std::to_string(a) + " belongs to no component");

  detail::check_planar(d);

  // Each transition a -> b along a component passes through one crossing, entering at slot s
  // and leaving at s+2.  Solve for the slots by propagation.
  struct Transition {
    int from, to;
    std::vector<Slot> cand;
  };
  std::vector<Transition> tr;
  for (const auto& o : d.orientations)
    for (size_t i = 0; i < o.size(); ++i) {
      Transition t{o[i], o[(i + 1) % o.size()], {}};
      for (int x = 0; x < n; ++x)
        for (int s = 0; s < 4; ++s) {
          const auto& X = d.crossings[x];
          if (X.arcs[s] != t.from || X.arcs[(s + 2) % 4] != t.to || s == 2) continue;
          if (s == 3 && X.sign == -1) continue;
          if (s == 1 && X.sign == 1) continue;
          t.cand.push_back({x, s});
        }
      if (t.cand.empty())
        throw InputError("orientation inconsistency: arcs " + std::to_string(t.from) + " -> " + std::to_string(t.to) +
                         " do not pass through a crossing");
      tr.push_back(std::move(t));
    }
  std::set<std::pair<int, int>> used;  // (crossing, axis)
  std::vector<int> chosen(tr.size(), -1);
  for (bool progress = true; progress;) {
    progress = false;
    for (size_t i = 0; i < tr.size(); ++i) {
      if (chosen[i] >= 0) continue;
      auto& c = tr[i].cand;
      c.erase(std::remove_if(c.begin(), c.end(), [&](Slot e) { return used.count({e.crossing, e.slot % 2}); }), c.end());
      if (c.empty())
        throw InputError("orientation inconsistency at arc " + std::to_string(tr[i].from));
      if (c.size() == 1) {
        chosen[i] = 0;
        used.insert({c[0].crossing, c[0].slot % 2});
        progress = true;
      }
    }
  }
  for (size_t i = 0; i < tr.size(); ++i)
    if (chosen[i] < 0)
      throw InputError("orientation ambiguous at arc " + std::to_string(tr[i].from) + "; give crossing signs");

  d.head.clear();
  d.tail.clear();
  for (const auto& t : tr) {
    Slot h = t.cand[0];
    d.head[t.from] = h;
    d.tail[t.to] = {h.crossing, (h.slot + 2) % 4};
  }
  for (int x = 0; x < n; ++x) {
    auto& X = d.crossings[x];
    int s = d.head.at(X.arcs[3]) == Slot{x, 3} ? 1 : -1;
    if (X.sign != 0 && X.sign != s)
      throw InputError("orientation inconsistency: crossing " + std::to_string(x) + " sign disagrees with orientations");
    X.sign = s;
  }
}

inline Diagram make_diagram(std::vector<std::array<int, 4>> crossings, std::vector<std::vector<int>> orientations,
                            std::vector<int> free_loops = {}, std::vector<int> base_edges = {}) {
  Diagram d;
  d.components = int(orientations.size());
  for (auto& a : crossings) d.crossings.push_back({a, 0});
  d.orientations = std::move(orientations);
  d.free_loops = std::move(free_loops);
  d.base_edges = std::move(base_edges);
  orient(d);
  return d;
}

inline Diagram unknot_diagram() { return make_diagram({}, {{}}); }

// ---- PD JSON ----

inline Diagram parse_diagram(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("syntax error: top level must be an object");
  static const std::set<std::string> keys{"components", "crossings", "orientations", "base_edges", "free_loops"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw InputError("unknown field \"" + k + "\"");
  auto ints = [](const json& v, const char* what) {
    if (!v.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw InputError(std::string(what) + " entries must be integers");
      out.push_back(e.get<int>());
    }
    return out;
  };
  Diagram d;
  if (!j.contains("components") || !j["components"].is_number_integer())
    throw InputError("\"components\" must be an integer");
  d.components = j["components"].get<int>();
  if (j.contains("crossings")) {
    if (!j["crossings"].is_array()) throw InputError("\"crossings\" must be an array");
    for (const auto& x : j["crossings"]) {
      auto v = ints(x, "crossing");
      if (v.size() != 4 && v.size() != 5) throw InputError("a crossing has 4 arcs and an optional sign");
      Crossing c;
      std::copy_n(v.begin(), 4, c.arcs.begin());
      if (v.size() == 5) {
        if (v[4] != 1 && v[4] != -1) throw InputError("crossing sign must be +1 or -1");
        c.sign = v[4];
      }
      d.crossings.push_back(c);
    }
  }
  if (!j.contains("orientations") || !j["orientations"].is_array())
    throw InputError("\"orientations\" must be an array");
  for (const auto& o : j["orientations"]) d.orientations.push_back(ints(o, "orientation"));
  if (j.contains("free_loops")) d.free_loops = ints(j["free_loops"], "free_loops");
  if (j.contains("base_edges")) {
    if (!j["base_edges"].is_array()) throw InputError("\"base_edges\" must be an array");
    for (const auto& b : j["base_edges"]) {
      if (b.is_null()) d.base_edges.push_back(0);
      else if (b.is_number_integer()) d.base_edges.push_back(b.get<int>());
      else throw InputError("base_edges entries must be integers or null");
    }
  }
  orient(d);
  return d;
}

inline Diagram load_diagram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_diagram(ss.str());
}

// Canonical text form; parse(serialize(d)) reproduces d and serialize is idempotent on its output.
inline std::string serialize(const Diagram& d) {
  auto list = [](const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
  };
  std::string out = "{\n  \"components\": " + std::to_string(d.components) + ",\n  \"crossings\": [";
  for (size_t i = 0; i < d.crossings.size(); ++i) {
    const auto& x = d.crossings[i];
    out += (i ? ", " : "") + list({x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3], x.sign});
  }
  out += "],\n  \"orientations\": [";
  for (size_t i = 0; i < d.orientations.size(); ++i) out += (i ? ", " : "") + list(d.orientations[i]);
  out += "],\n  \"base_edges\": [";
  for (size_t i = 0; i < d.base_edges.size(); ++i)
    out += (i ? ", " : "") + (d.base_edges[i] ? std::to_string(d.base_edges[i]) : std::string("null"));
  out += "],\n  \"free_loops\": " + list(d.free_loops) + "\n}\n";
  return out;
}

// ---- cabling ----

using ColorTuple = std::vector<int>;

struct StrandId {
  int component = 0;
  int strand = 0;  // 1-based
  auto operator<=>(const StrandId&) const = default;
};

struct CableCrossing {
  int source = -1;  // crossing of the original diagram
  int source_sign = 0;
  StrandId under, over;
  int column = 0, row = 0;  // position in the grid, 1-based, west->east and south->north
};

struct CableDiagram {
  Diagram diagram;
  ColorTuple colors;
  std::vector<StrandId> strand_of;    // per component of `diagram`
  std::vector<CableCrossing> origin;  // per crossing of `diagram`
  std::vector<int> full_crossing;     // crossing index in the full cable
  std::map<int, int> arc_rep;         // arc of the full cable -> arc here (surviving strands only)
};

struct Reduction {
  Diagram diagram;
  std::vector<int> kept_crossings;
  std::vector<int> kept_components;
  std::map<int, int> arc_rep;
};

// Deletes the components with keep[c] == false; the surviving strands are glued through
// every crossing they lose.  Arcs are renamed to the smallest label of their merged class.
inline Reduction remove_components(const Diagram& d, const std::vector<bool>& keep) {
  std::map<int, int> parent;
  for (const auto& x : d.crossings)
    for (int a : x.arcs) parent[a] = a;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  Reduction r;
  for (int x = 0; x < int(d.crossings.size()); ++x) {
    const auto& X = d.crossings[x];
    bool ku = keep[d.arc_component.at(X.arcs[0])];
    bool ko = keep[d.arc_component.at(X.arcs[1])];
    if (ku && ko) {
      r.kept_crossings.push_back(x);
      continue;
    }
    if (ku) unite(X.arcs[0], X.arcs[2]);
    if (ko) unite(X.arcs[1], X.arcs[3]);
  }
  std::set<int> live;
  Diagram& nd = r.diagram;
  for (int x : r.kept_crossings) {
    Crossing c = d.crossings[x];
    for (int& a : c.arcs) live.insert(a = find(a));
    nd.crossings.push_back(c);
  }
  for (int c = 0; c < d.components; ++c) {
    if (!keep[c]) continue;
    r.kept_components.push_back(c);
    const auto& o = d.orientations[c];
    std::vector<int> seq;
    for (int a : o)
      if (seq.empty() || seq.back() != find(a)) seq.push_back(find(a));
    while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
    bool used = !seq.empty() && live.count(seq.front());
    if (used) {
      nd.orientations.push_back(seq);
      nd.free_loops.push_back(0);
      nd.base_edges.push_back(find(d.base_edges[c]));
    } else {
      nd.orientations.push_back({});
      nd.free_loops.push_back(1);
      nd.base_edges.push_back(0);
    }
  }
  nd.components = int(r.kept_components.size());
  for (const auto& [a, p] : parent) {
    int rep = find(a);
    if (keep[d.arc_component.at(a)] && live.count(rep)) r.arc_rep[a] = rep;
  }
  orient(nd);
  return r;
}

inline CableDiagram cable(const Diagram& src, const ColorTuple& n) {
  if (int(n.size()) != src.components)
    throw InputError("color tuple has " + std::to_string(n.size()) + " entries, diagram has " +
                     std::to_string(src.components) + " components");
  for (int c : n)
    if (c < 0) throw InputError("colors must be non-negative");

  // Components of color 0 vanish first, so every remaining crossing has a non-empty grid.
  std::vector<bool> keep(src.components);
  for (int c = 0; c < src.components; ++c) keep[c] = n[c] > 0;
  Reduction red = remove_components(src, keep);
  const Diagram& d = red.diagram;
  std::vector<int> col(d.components);
  for (int c = 0; c < d.components; ++c) col[c] = n[red.kept_components[c]];

  int next = 1;
  std::map<std::pair<int, int>, int> ext;  // (arc, strand) -> label
  for (int c = 0; c < d.components; ++c)
    for (int a : d.orientations[c])
      for (int t = 1; t <= col[c]; ++t) ext[{a, t}] = next++;

  CableDiagram out;
  out.colors = n;
  Diagram& cd = out.diagram;
  // interior segments each strand runs through, keyed by (crossing, under?, strand)
  std::map<std::tuple<int, bool, int>, std::vector<int>> paths;
  for (int xi = 0; xi < int(d.crossings.size()); ++xi) {
    const auto& X = d.crossings[xi];
    int cu = d.arc_component.at(X.arcs[0]), co = d.arc_component.at(X.arcs[1]);
    int nu = col[cu], no = col[co];
    bool over_we = X.sign > 0;  // over strand travels from slot 3 (west) to slot 1 (east)
    auto strand_of_row = [&](int q) { return over_we ? no + 1 - q : q; };
    std::map<std::pair<int, int>, int> V, H;
    for (int p = 1; p <= nu; ++p)
      for (int q = 0; q <= no; ++q)
        V[{p, q}] = q == 0 ? ext.at({X.arcs[0], p}) : q == no ? ext.at({X.arcs[2], p}) : next++;
    for (int q = 1; q <= no; ++q)
      for (int p = 0; p <= nu; ++p)
        H[{p, q}] = p == 0 ? ext.at({X.arcs[3], strand_of_row(q)}) : p == nu ? ext.at({X.arcs[1], strand_of_row(q)}) : next++;
    for (int p = 1; p <= nu; ++p) {
      auto& path = paths[{xi, true, p}];
      for (int q = 1; q < no; ++q) path.push_back(V[{p, q}]);
    }
    for (int q = 1; q <= no; ++q) {
      auto& path = paths[{xi, false, strand_of_row(q)}];
      for (int p = 1; p < nu; ++p) path.push_back(H[{p, q}]);
      if (!over_we) std::reverse(path.begin(), path.end());
    }
    for (int p = 1; p <= nu; ++p)
      for (int q = 1; q <= no; ++q) {
        int S = V[{p, q - 1}], N = V[{p, q}], W = H[{p - 1, q}], E = H[{p, q}];
        int t_over = strand_of_row(q);
        Crossing c;
        c.arcs = p % 2 == 1 ? std::array<int, 4>{S, E, N, W} : std::array<int, 4>{N, W, S, E};
        // reversing either strand flips the sign
        c.sign = X.sign * (p % 2 == 0 ? -1 : 1) * (t_over % 2 == 0 ? -1 : 1);
        cd.crossings.push_back(c);
        out.origin.push_back({red.kept_crossings[xi], X.sign, {red.kept_components[cu], p},
                              {red.kept_components[co], t_over}, p, q});
      }
  }
  for (int c = 0; c < src.components; ++c) {
    auto it = std::find(red.kept_components.begin(), red.kept_components.end(), c);
    if (it == red.kept_components.end()) continue;
    int rc = int(it - red.kept_components.begin());
    for (int t = 1; t <= n[c]; ++t) {
      std::vector<int> seq;
      for (int a : d.orientations[rc]) {
        seq.push_back(ext.at({a, t}));
        Slot h = d.head.at(a);
        const auto& p = paths.at({h.crossing, h.slot == 0, t});
        seq.insert(seq.end(), p.begin(), p.end());
      }
      if (t % 2 == 0) std::reverse(seq.begin(), seq.end());
      bool loop = seq.empty();
      cd.orientations.push_back(seq);
      cd.free_loops.push_back(loop ? 1 : 0);
      cd.base_edges.push_back(loop ? 0 : ext.at({d.base_edges[rc], t}));
      out.strand_of.push_back({c, t});
    }
  }
  cd.components = int(cd.orientations.size());
  orient(cd);
  out.full_crossing.resize(cd.crossings.size());
  std::iota(out.full_crossing.begin(), out.full_crossing.end(), 0);
  for (const auto& [a, c] : cd.arc_component) out.arc_rep[a] = a;
  return out;
}

// D^s: delete the given strands of a cable.
inline CableDiagram subcable(const CableDiagram& cd, const std::set<StrandId>& removed) {
  for (const auto& s : removed) {
    if (s.component < 0 || s.component >= int(cd.colors.size()) || s.strand < 1 || s.strand > cd.colors[s.component])
      throw InputError("strand index out of range for the color tuple");
  }
  std::vector<bool> keep(cd.strand_of.size());
  for (size_t c = 0; c < keep.size(); ++c) keep[c] = !removed.count(cd.strand_of[c]);
  Reduction r = remove_components(cd.diagram, keep);
  CableDiagram out;
  out.diagram = std::move(r.diagram);
  out.colors = cd.colors;
  for (int c : r.kept_components) out.strand_of.push_back(cd.strand_of[c]);
  for (int x : r.kept_crossings) {
    out.origin.push_back(cd.origin[x]);
    out.full_crossing.push_back(cd.full_crossing[x]);
  }
  for (const auto& [full, a] : cd.arc_rep) {
    auto it = r.arc_rep.find(a);
    if (it != r.arc_rep.end()) out.arc_rep[full] = it->second;
  }
  return out;
}

}  // namespace khovacable
