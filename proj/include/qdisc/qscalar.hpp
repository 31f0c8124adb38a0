#pragma once

#include <vector>

#include "qdisc/errors.hpp"
#include "qdisc/rational.hpp"
#include "qdisc/tseries.hpp"

namespace qdisc {

/// The deformation base. Every formula in the library is evaluated at a
/// concrete rational q with 0 < q < 1.
class QContext {
 public:
  explicit QContext(Rational q) : q_(std::move(q)) {
    q_.canonicalize();
    if (sgn(q_) <= 0 || q_ >= 1) throw ConfigInvalid("q must satisfy 0 < q < 1, got " + to_string(q_));
    q2_ = q_ * q_;
  }

  const Rational& q() const { return q_; }
  const Rational& q2() const { return q2_; }

  /// q^(2n), any integer n.
  Rational q2pow(long n) const { return ipow(q2_, n); }

  /// [n]_{base} = (1 - base^n) / (1 - base).
  static Rational qint(long n, const Rational& base) {
    return (1 - ipow(base, n)) / (1 - base);
  }

 private:
  Rational q_;
  Rational q2_;
};

/// (a; base)_n = prod_{i<n} (1 - a base^i); the empty product is 1.
template <Scalar R>
R qpoch(const R& a, const Rational& base, int n) {
  if (n < 0) throw IndexOutOfRange("q-Pochhammer length must be >= 0");
  R result = lift(a, Rational(1));
  Rational power = 1;
  for (int i = 0; i < n; ++i) {
    R factor = lift(a, Rational(1)) - a * power;
    result = result * factor;
    power *= base;
  }
  return result;
}

inline Rational qpoch(const Rational& a, const Rational& base, int n) {
  return qpoch<Rational>(a, base, n);
}

/// q-binomial series sum_m (c;q^2)_m / (q^2;q^2)_m x^m to order N, which
/// sums to (c x; q^2)_inf / (x; q^2)_inf.
inline TSeries qbinom_expand(const QContext& ctx, const Rational& c, int order) {
  TSeries s(order);
  Rational num = 1;
  Rational den = 1;
  for (int m = 0; m <= order; ++m) {
    s[m] = num / den;
    num *= 1 - c * ctx.q2pow(m);
    den *= 1 - ctx.q2pow(m + 1);
  }
  return s;
}

/// Terminating 3phi2[q^{-2j}, a2, a3; q^2, 0; q^2, q^2].
inline Rational phi32_terminating(const QContext& ctx, int j, const Rational& a2,
                                  const Rational& a3) {
  if (j < 0) throw IndexOutOfRange("phi32 needs j >= 0");
  const Rational& q2 = ctx.q2();
  Rational sum = 0;
  for (int k = 0; k <= j; ++k) {
    Rational den = qpoch(q2, q2, k);
    Rational term = qpoch(ctx.q2pow(-j), q2, k) / (den * den);
    term *= qpoch(a2, q2, k) * qpoch(a3, q2, k) * ctx.q2pow(k);
    sum += term;
  }
  return sum;
}

/// Eigenvalue of the Laplace-Beltrami operator on phi_l, with s = q^{2l}:
/// -(1 - s^{-1})(1 - q^2 s) / (1 - q^2)^2.
inline Rational box_eigenvalue(const QContext& ctx, const Rational& s) {
  if (sgn(s) == 0) throw DivByZero("box_eigenvalue needs s = q^{2l} != 0");
  Rational one_minus_q2 = 1 - ctx.q2();
  Rational value = -(1 - 1 / s) * (1 - ctx.q2() * s) / (one_minus_q2 * one_minus_q2);
  return value;
}

}  // namespace qdisc
