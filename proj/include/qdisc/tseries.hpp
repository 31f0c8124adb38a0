#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qdisc/errors.hpp"
#include "qdisc/rational.hpp"

namespace qdisc {

/// Truncated power series in the deformation parameter t, exact modulo
/// t^(order+1). All binary operations require equal truncation orders.
class TSeries {
 public:
  TSeries() : coeffs_(1) {}
  explicit TSeries(int order) : coeffs_(checked_length(order)) {}
  TSeries(int order, const Rational& constant) : coeffs_(checked_length(order)) {
    coeffs_[0] = constant;
  }

  static TSeries variable(int order) {
    TSeries t(order);
    if (order >= 1) t.coeffs_[1] = 1;
    return t;
  }

  static TSeries from_coeffs(std::vector<Rational> coeffs) {
    if (coeffs.empty()) throw OrderMismatch("series needs at least one coefficient");
    TSeries s;
    s.coeffs_ = std::move(coeffs);
    return s;
  }

  /// c * t^n, zero if n exceeds the order.
  static TSeries monomial(int order, int n, const Rational& c) {
    TSeries s(order);
    if (n >= 0 && n <= order) s.coeffs_[static_cast<std::size_t>(n)] = c;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  const Rational& operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
  Rational& operator[](int n) { return coeffs_.at(static_cast<std::size_t>(n)); }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (sgn(c) != 0) return false;
    }
    return true;
  }

  TSeries& operator+=(const TSeries& rhs) {
    require_same_order(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
  }
  TSeries& operator-=(const TSeries& rhs) {
    require_same_order(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
  }
  TSeries& operator*=(const TSeries& rhs) {
    require_same_order(rhs);
    const std::size_t n = coeffs_.size();
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) {
        if (sgn(rhs.coeffs_[j]) == 0) continue;
        out[i + j] += coeffs_[i] * rhs.coeffs_[j];
      }
    }
    coeffs_ = std::move(out);
    return *this;
  }
  TSeries& operator/=(const TSeries& rhs) { return *this *= rhs.inverse(); }

  TSeries& operator+=(const Rational& c) {
    coeffs_[0] += c;
    return *this;
  }
  TSeries& operator-=(const Rational& c) {
    coeffs_[0] -= c;
    return *this;
  }
  TSeries& operator*=(const Rational& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
  }
  TSeries& operator/=(const Rational& c) {
    if (sgn(c) == 0) throw DivByZero("series divided by zero");
    for (auto& x : coeffs_) x /= c;
    return *this;
  }

  TSeries operator-() const {
    TSeries r = *this;
    for (auto& x : r.coeffs_) x = -x;
    return r;
  }

  /// Multiplicative inverse; the constant term must be nonzero.
  TSeries inverse() const {
    const Rational& c0 = coeffs_[0];
    if (sgn(c0) == 0) throw InvertNonUnit("constant term is zero");
    const std::size_t n = coeffs_.size();
    std::vector<Rational> inv(n);
    Rational c0_inv = 1 / c0;
    inv[0] = c0_inv;
    for (std::size_t k = 1; k < n; ++k) {
      Rational acc = 0;
      for (std::size_t i = 1; i <= k; ++i) {
        if (sgn(coeffs_[i]) != 0) acc += coeffs_[i] * inv[k - i];
      }
      inv[k] = -acc * c0_inv;
    }
    return from_coeffs(std::move(inv));
  }

  /// f(t) -> f(lambda t).
  TSeries rescaled(const Rational& lambda) const {
    TSeries r = *this;
    Rational p = 1;
    for (auto& x : r.coeffs_) {
      x *= p;
      p *= lambda;
    }
    return r;
  }

  /// Evaluates the truncated polynomial at a rational point.
  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Same series re-truncated (or zero-padded) to a new order.
  TSeries with_order(int order) const {
    TSeries r(order);
    for (int i = 0; i <= std::min(order, this->order()); ++i) r[i] = (*this)[i];
    return r;
  }

  friend bool operator==(const TSeries& a, const TSeries& b) {
    return a.order() == b.order() && a.coeffs_ == b.coeffs_;
  }

  friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
  friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
  friend TSeries operator*(TSeries a, const TSeries& b) { return a *= b; }
  friend TSeries operator/(TSeries a, const TSeries& b) { return a /= b; }
  friend TSeries operator+(TSeries a, const Rational& c) { return a += c; }
  friend TSeries operator-(TSeries a, const Rational& c) { return a -= c; }
  friend TSeries operator*(TSeries a, const Rational& c) { return a *= c; }
  friend TSeries operator/(TSeries a, const Rational& c) { return a /= c; }
  friend TSeries operator+(const Rational& c, TSeries a) { return a += c; }
  friend TSeries operator-(const Rational& c, const TSeries& a) {
    TSeries r = -a;
    return r += c;
  }
  friend TSeries operator*(const Rational& c, TSeries a) { return a *= c; }
  friend TSeries operator/(const Rational& c, const TSeries& a) { return a.inverse() * c; }

  friend std::ostream& operator<<(std::ostream& os, const TSeries& s) {
    bool first = true;
    for (int i = 0; i <= s.order(); ++i) {
      if (sgn(s[i]) == 0) continue;
      if (!first) os << " + ";
      os << '(' << s[i] << ')';
      if (i > 0) os << "*t^" << i;
      first = false;
    }
    if (first) os << '0';
    return os << " + O(t^" << s.order() + 1 << ')';
  }

 private:
  static std::size_t checked_length(int order) {
    if (order < 0) throw OrderMismatch("negative truncation order");
    return static_cast<std::size_t>(order) + 1;
  }

  void require_same_order(const TSeries& rhs) const {
    if (rhs.coeffs_.size() != coeffs_.size()) {
      throw OrderMismatch("orders " + std::to_string(order()) + " and " +
                          std::to_string(rhs.order()));
    }
  }

  std::vector<Rational> coeffs_;
};

inline bool is_zero(const TSeries& s) { return s.is_zero(); }

inline TSeries divide(const TSeries& a, const TSeries& b) { return a / b; }

inline TSeries lift(const TSeries& like, const Rational& c) { return TSeries(like.order(), c); }

/// Scalar types the operator algebra is templated over.
template <class R>
concept Scalar = requires(const R& a, const R& b, const Rational& c) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { a * c } -> std::convertible_to<R>;
  { lift(a, c) } -> std::convertible_to<R>;
  { is_zero(a) } -> std::convertible_to<bool>;
};

}  // namespace qdisc
