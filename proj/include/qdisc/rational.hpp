#pragma once

#include <gmpxx.h>

#include <string>

#include "qdisc/errors.hpp"

namespace qdisc {

/// Exact scalar. gmpxx keeps results of arithmetic canonical.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DivByZero("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p" or "p/q".
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw ConfigInvalid("not a rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw DivByZero("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

/// Always "p/q", also for integers, so serialized values are uniform.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

/// Integer power, negative exponents allowed for nonzero base.
inline Rational ipow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (is_zero(base)) throw DivByZero("zero to a negative power");
    Rational inv = 1 / base;
    return ipow(inv, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  auto e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

/// Quotient that reports division by zero instead of trapping.
inline Rational divide(const Rational& a, const Rational& b) {
  if (is_zero(b)) throw DivByZero("rational division by zero");
  return a / b;
}

/// Lifts a rational constant into the ring of `like`.
inline Rational lift(const Rational& /*like*/, const Rational& c) { return c; }

}  // namespace qdisc
