#pragma once

#include <map>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

namespace khovacable {

using Int = mpz_class;

// Exact Laurent polynomial in one variable; zero coefficients are never stored.
class LaurentPoly {
 public:
  explicit LaurentPoly(char var = 'q') : var_(var) {}
  static LaurentPoly monomial(char var, int e, const Int& c = 1) {
    LaurentPoly p(var);
    p.add(e, c);
    return p;
  }

  char var() const { return var_; }
  const std::map<int, Int>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Int coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Int(0) : it->second;
  }

  void add(int e, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = t_.emplace(e, c);
    if (!fresh && (it->second += c) == 0) t_.erase(it);
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.t_) add(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.t_) add(e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const Int& s) {
    if (s == 0) t_.clear();
    for (auto& [e, c] : t_) c *= s;
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const Int& s) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r(a.var_);
    for (const auto& [e1, c1] : a.t_)
      for (const auto& [e2, c2] : b.t_) r.add(e1 + e2, c1 * c2);
    return r;
  }
  LaurentPoly pow(unsigned k) const {
    LaurentPoly r = monomial(var_, 0);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }
  LaurentPoly shifted(int by) const {
    LaurentPoly r(var_);
    for (const auto& [e, c] : t_) r.t_.emplace(e + by, c);
    return r;
  }
  bool operator==(const LaurentPoly& o) const { return t_ == o.t_; }

  // Highest exponent first, e.g. "q^2 + 1 + q^-2".
  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [e, c] = *it;
      Int a = abs(c);
      if (s.empty()) s += c < 0 ? "-" : "";
      else s += c < 0 ? " - " : " + ";
      if (e == 0) {
        s += a.get_str();
        continue;
      }
      if (a != 1) s += a.get_str();
      s += var_;
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json terms = nlohmann::ordered_json::object();
    for (const auto& [e, c] : t_) {
      if (c.fits_slong_p()) terms[std::to_string(e)] = c.get_si();
      else terms[std::to_string(e)] = c.get_str();
    }
    return {{"variable", std::string(1, var_)}, {"terms", terms}, {"text", str()}};
  }

 private:
  char var_;
  std::map<int, Int> t_;
};

}  // namespace khovacable
