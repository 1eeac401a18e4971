#pragma once

#include <ostream>
#include <string>

#include <khovacable/diagram.hpp>
#include <khovacable/laurent.hpp>

namespace khovacable {
inline void PrintTo(const LaurentPoly& p, std::ostream* os) { *os << p.str(); }
}  // namespace khovacable

namespace testutil {

inline khovacable::Diagram corpus(const std::string& name) {
  return khovacable::load_diagram(std::string(KHOVACABLE_CORPUS_DIR) + "/" + name + ".json");
}

inline khovacable::LaurentPoly poly(std::initializer_list<std::pair<int, long>> terms, char var = 'q') {
  khovacable::LaurentPoly p(var);
  for (const auto& [e, c] : terms) p.add(e, c);
  return p;
}

// Twice the linking number of components a and b, read off the crossing signs.
inline int twice_lk(const khovacable::Diagram& d, int a, int b) {
  int s = 0;
  for (int x = 0; x < int(d.crossings.size()); ++x) {
    int u = d.component_of_crossing_strand(x, 0), o = d.component_of_crossing_strand(x, 1);
    if ((u == a && o == b) || (u == b && o == a)) s += d.crossings[x].sign;
  }
  return s;
}

}  // namespace testutil
