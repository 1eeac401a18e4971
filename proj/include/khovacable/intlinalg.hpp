#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "errors.hpp"

namespace khovacable {

using Int = mpz_class;

struct Entry {
  std::size_t row, col;
  Int value;
};

// Sparse integer matrix; entries are kept sorted by (row, col) with no zeros.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.e_.push_back({i, i, 1});
    return m;
  }
  static IntMatrix from_dense(const std::vector<std::vector<Int>>& a, std::size_t cols) {
    IntMatrix m(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (a[i][j] != 0) m.e_.push_back({i, j, a[i][j]});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return e_; }

  // Accumulates into (r, c); call normalize() after a batch of adds.
  void add(std::size_t r, std::size_t c, const Int& v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
    if (v != 0) e_.push_back({r, c, v});
  }
  void normalize() {
    std::sort(e_.begin(), e_.end(), [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    std::vector<Entry> out;
    for (auto& x : e_) {
      if (!out.empty() && out.back().row == x.row && out.back().col == x.col) out.back().value += x.value;
      else {
        if (!out.empty() && out.back().value == 0) out.pop_back();
        out.push_back(std::move(x));
      }
    }
    if (!out.empty() && out.back().value == 0) out.pop_back();
    e_ = std::move(out);
  }

  std::vector<std::vector<Int>> dense() const {
    std::vector<std::vector<Int>> a(rows_, std::vector<Int>(cols_, 0));
    for (const auto& x : e_) a[x.row][x.col] = x.value;
    return a;
  }
  bool is_zero() const { return e_.empty(); }
  bool operator==(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || e_.size() != o.e_.size()) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i].row != o.e_[i].row || e_[i].col != o.e_[i].col || e_[i].value != o.e_[i].value) return false;
    return true;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not compose");
    std::vector<std::vector<const Entry*>> brow(b.rows_);
    for (const auto& x : b.e_) brow[x.row].push_back(&x);
    IntMatrix c(a.rows_, b.cols_);
    for (const auto& x : a.e_)
      for (const Entry* y : brow[x.col]) c.e_.push_back({x.row, y->col, x.value * y->value});
    c.normalize();
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& x : e_) t.push_back({x.row, x.col, x.value.get_str()});
    return {{"rows", rows_}, {"cols", cols_}, {"entries", t}};
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Entry> e_;
};

struct SmithResult {
  IntMatrix S, U, V;  // U * m * V == S
  std::vector<Int> diagonal;  // nonzero invariant factors, each dividing the next
};

namespace detail {

using Dense = std::vector<std::vector<Int>>;

inline void swap_rows(Dense& a, std::size_t i, std::size_t j) { std::swap(a[i], a[j]); }
inline void swap_cols(Dense& a, std::size_t i, std::size_t j) {
  for (auto& r : a) std::swap(r[i], r[j]);
}
inline void add_row(Dense& a, std::size_t dst, std::size_t src, const Int& f) {  // row_dst += f row_src
  for (std::size_t k = 0; k < a[dst].size(); ++k)
    if (a[src][k] != 0) a[dst][k] += f * a[src][k];
}
inline void add_col(Dense& a, std::size_t dst, std::size_t src, const Int& f) {
  for (auto& r : a)
    if (r[src] != 0) r[dst] += f * r[src];
}

// In-place Smith reduction with smallest-magnitude pivoting.  U (rows x rows) and V (cols x cols)
// accumulate the operations when given.
inline std::vector<Int> smith_dense(Dense& a, std::size_t rows, std::size_t cols, Dense* U, Dense* V) {
  std::vector<Int> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero in the trailing block
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!best || abs(a[i][j]) < abs(a[best->first][best->second]))) best = {{i, j}};
      if (!best) return diag;
      if (best->first != t) {
        swap_rows(a, t, best->first);
        if (U) swap_rows(*U, t, best->first);
      }
      if (best->second != t) {
        swap_cols(a, t, best->second);
        if (V) swap_cols(*V, t, best->second);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        add_row(a, i, t, -q);
        if (U) add_row(*U, i, t, -q);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        add_col(a, j, t, -q);
        if (V) add_col(*V, j, t, -q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;  // a smaller remainder exists; it becomes the next pivot
      // divisibility: pull an offending row into the pivot row
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < rows && !bad; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] != 0 && !mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
            bad = i;
            break;
          }
      if (!bad) break;
      add_row(a, t, *bad, 1);
      if (U) add_row(*U, t, *bad, 1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      if (U)
        for (auto& x : (*U)[t]) x = -x;
    }
    diag.push_back(a[t][t]);
  }
  return diag;
}

}  // namespace detail

inline SmithResult smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  detail::Dense a = m.dense();
  detail::Dense U = IntMatrix::identity(r).dense(), V = IntMatrix::identity(c).dense();
  SmithResult res;
  res.diagonal = detail::smith_dense(a, r, c, &U, &V);
  res.S = IntMatrix::from_dense(a, c);
  res.U = IntMatrix::from_dense(U, r);
  res.V = IntMatrix::from_dense(V, c);
  return res;
}

// Determinant by fraction-free elimination; used to certify unimodularity.
inline Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  detail::Dense a = m.dense();
  Int prev = 1, sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) std::swap(a[p], a[k]), sign = -sign;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return n ? Int(sign * a[n - 1][n - 1]) : Int(1);
}

// Rank over Q by Bareiss elimination (independent of the Smith code path).
inline std::size_t rank_bareiss(const IntMatrix& m) {
  detail::Dense a = m.dense();
  const std::size_t rows = m.rows(), cols = m.cols();
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[i][j] * a[r][c] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

// Nonzero invariant factors of a (possibly large, sparse) matrix.  Unit pivots are eliminated
// sparsely first; what is left goes through the dense Smith reduction.
inline std::vector<Int> invariant_factors(const IntMatrix& m) {
  std::vector<std::map<std::size_t, Int>> rows(m.rows());
  std::vector<std::set<std::size_t>> colrows(m.cols());
  for (const auto& x : m.entries()) {
    rows[x.row][x.col] = x.value;
    colrows[x.col].insert(x.row);
  }
  std::size_t units = 0;
  std::vector<char> row_dead(m.rows(), 0);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (colrows[c].empty()) continue;
      // unit entry in the shortest row
      std::optional<std::size_t> piv;
      for (std::size_t r : colrows[c]) {
        const Int& v = rows[r].at(c);
        if ((v == 1 || v == -1) && (!piv || rows[r].size() < rows[*piv].size())) piv = r;
      }
      if (!piv) continue;
      const std::size_t pr = *piv;
      const Int pv = rows[pr].at(c);
      std::vector<std::size_t> others(colrows[c].begin(), colrows[c].end());
      for (std::size_t r : others) {
        if (r == pr) continue;
        Int f = -rows[r].at(c) * pv;  // pv is its own inverse
        for (const auto& [j, v] : rows[pr]) {
          Int& dst = rows[r][j];
          bool was_zero = dst == 0;
          dst += f * v;
          if (dst == 0) {
            rows[r].erase(j);
            colrows[j].erase(r);
          } else if (was_zero) {
            colrows[j].insert(r);
          }
        }
      }
      // the pivot row is now alone in column c; clearing it only touches that row
      for (const auto& [j, v] : rows[pr]) colrows[j].erase(pr);
      rows[pr].clear();
      row_dead[pr] = 1;
      ++units;
      progress = true;
    }
  }
  std::vector<std::size_t> rr, cc;
  std::map<std::size_t, std::size_t> cidx;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!rows[r].empty()) rr.push_back(r);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!colrows[c].empty()) cidx[c] = cc.size(), cc.push_back(c);
  detail::Dense a(rr.size(), std::vector<Int>(cc.size(), 0));
  for (std::size_t i = 0; i < rr.size(); ++i)
    for (const auto& [j, v] : rows[rr[i]]) a[i][cidx.at(j)] = v;
  std::vector<Int> rest = detail::smith_dense(a, rr.size(), cc.size(), nullptr, nullptr);
  std::vector<Int> out(units, Int(1));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

inline std::size_t rank(const IntMatrix& m) { return invariant_factors(m).size(); }

struct HomologySummary {
  std::size_t betti = 0;
  std::vector<Int> torsion;  // orders >= 2, each dividing the next
  bool operator==(const HomologySummary&) const = default;
  bool trivial() const { return betti == 0 && torsion.empty(); }
  std::string str() const {
    std::string s = betti || torsion.empty() ? std::to_string(betti) : "";
    for (const auto& t : torsion) s += (s.empty() ? "Z/" : "+Z/") + t.get_str();
    return s;
  }
};

// ker(d_out) / im(d_in) at the middle group.
inline HomologySummary homology_at(const IntMatrix& d_out, const IntMatrix& d_in) {
  if (d_out.cols() != d_in.rows()) throw std::invalid_argument("d_out and d_in do not meet at one group");
  IntMatrix comp = d_out * d_in;
  if (!comp.is_zero()) {
    const auto& e = comp.entries().front();
    throw IdentityError("not a complex: (d_out*d_in)[" + std::to_string(e.row) + "][" + std::to_string(e.col) +
                        "] = " + e.value.get_str());
  }
  auto fin = invariant_factors(d_in);
  HomologySummary h;
  h.betti = d_in.rows() - rank(d_out) - fin.size();
  for (const auto& f : fin)
    if (f > 1) h.torsion.push_back(f);
  return h;
}

}  // namespace khovacable
