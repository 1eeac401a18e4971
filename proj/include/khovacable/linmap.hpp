#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intlinalg.hpp"

namespace khovacable {

// Sparse linear map between based free abelian groups, stored column by column
// (column c = image of basis vector c).  Coefficients stay tiny here, so int64 is plenty.
struct LinearMap {
  using Column = std::vector<std::pair<std::size_t, std::int64_t>>;

  std::size_t rows = 0, cols = 0;
  std::vector<Column> col;

  LinearMap() = default;
  LinearMap(std::size_t r, std::size_t c) : rows(r), cols(c), col(c) {}

  void add(std::size_t r, std::size_t c, std::int64_t v) {
    if (v) col[c].emplace_back(r, v);
  }
  // Sorts each column and merges repeated rows.
  void finalize() {
    for (auto& cl : col) {
      std::sort(cl.begin(), cl.end());
      Column out;
      for (const auto& [r, v] : cl) {
        if (!out.empty() && out.back().first == r) out.back().second += v;
        else out.emplace_back(r, v);
      }
      std::erase_if(out, [](const auto& e) { return e.second == 0; });
      cl = std::move(out);
    }
  }
  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : col) n += c.size();
    return n;
  }

  IntMatrix to_matrix() const {
    IntMatrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : col[c]) m.add(r, c, Int(static_cast<long>(v)));
    m.normalize();
    return m;
  }

  // Submatrix on selected rows/columns (given as lists of basis indices).
  IntMatrix block(const std::vector<std::size_t>& rsel, const std::vector<std::size_t>& csel) const {
    std::unordered_map<std::size_t, std::size_t> rpos;
    for (std::size_t i = 0; i < rsel.size(); ++i) rpos[rsel[i]] = i;
    IntMatrix m(rsel.size(), csel.size());
    for (std::size_t j = 0; j < csel.size(); ++j)
      for (const auto& [r, v] : col[csel[j]]) {
        auto it = rpos.find(r);
        if (it != rpos.end()) m.add(it->second, j, Int(static_cast<long>(v)));
      }
    m.normalize();
    return m;
  }
};

struct Witness {
  std::size_t row, col;
  std::int64_t value;
};

// First nonzero entry of a*b + s*(c*d) (column-major scan), or nothing when the sum vanishes.
// Pass empty maps for c, d to test a*b alone.
inline std::optional<Witness> composition_witness(const LinearMap& a, const LinearMap& b, const LinearMap* c = nullptr,
                                                  const LinearMap* d = nullptr, std::int64_t s = 1) {
  std::unordered_map<std::size_t, std::int64_t> acc;
  for (std::size_t j = 0; j < b.cols; ++j) {
    acc.clear();
    for (const auto& [m, v] : b.col[j])
      for (const auto& [r, w] : a.col[m]) acc[r] += v * w;
    if (c && d)
      for (const auto& [m, v] : d->col[j])
        for (const auto& [r, w] : c->col[m]) acc[r] += s * v * w;
    std::optional<Witness> best;
    for (const auto& [r, v] : acc)
      if (v != 0 && (!best || r < best->row)) best = Witness{r, j, v};
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace khovacable
