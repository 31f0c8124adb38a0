#pragma once

// q-derivatives on the quantum disc and the bidifferential operator box~.
//
// The base action of d/dz on z^n is not fixed by the algebra alone, so the
// choices are enumerated in ConventionSet and one is selected by comparing
// the star product computed two ways (see starprod.hpp).

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qdisc/discrep.hpp"
#include "qdisc/ordered.hpp"
#include "qdisc/poly.hpp"

namespace qdisc {

enum class Variable { kZ, kZStar };
enum class Side { kLeft, kRight };

enum class ZRule {
  kQ2,   // left d/dz z^n = [n]_{q^2} z^{n-1}
  kQm2,  // left d/dz z^n = [n]_{q^-2} z^{n-1}
};
enum class ZbarRule {
  kMirrored,  // right d/dz* uses the same base as left d/dz
  kSwapped,   // right d/dz* uses the other base
};
enum class PrefactorOrder {
  kAfter,   // quadratic prefactor of box~ multiplies the derivative
  kBefore,  // prefactor first, then differentiate
};

struct ConventionSet {
  ZRule z = ZRule::kQm2;
  ZbarRule zbar = ZbarRule::kMirrored;
  PrefactorOrder prefactor = PrefactorOrder::kAfter;

  friend bool operator==(const ConventionSet&, const ConventionSet&) = default;

  std::string id() const {
    return std::string(z == ZRule::kQ2 ? "z-q2" : "z-qm2") +
           (zbar == ZbarRule::kMirrored ? "/mirror" : "/swap") +
           (prefactor == PrefactorOrder::kAfter ? "/after" : "/before");
  }

  static std::array<ConventionSet, 8> all() {
    std::array<ConventionSet, 8> out;
    std::size_t i = 0;
    for (ZRule z : {ZRule::kQ2, ZRule::kQm2})
      for (ZbarRule b : {ZbarRule::kMirrored, ZbarRule::kSwapped})
        for (PrefactorOrder p : {PrefactorOrder::kAfter, PrefactorOrder::kBefore})
          out[i++] = ConventionSet{z, b, p};
    return out;
  }

  static ConventionSet parse(const std::string& id) {
    for (const auto& c : all())
      if (c.id() == id) return c;
    throw ConfigInvalid("unknown convention '" + id + "'");
  }
};

/// The convention selected by calibration; it is also the one implied by the
/// Leibniz rule together with dz z = q^2 z dz.
inline ConventionSet calibrated_convention() { return ConventionSet{}; }

namespace detail {

inline Rational base_of(const QContext& ctx, bool q2_base) { return q2_base ? ctx.q2() : 1 / ctx.q2(); }

/// Scalar c with d z^n = c z^{n-1} (or the z* mirror).
inline Rational power_derivative(const QContext& ctx, Variable v, Side side, int n,
                                 const ConventionSet& conv) {
  if (n == 0) return 0;
  const bool z_left_q2 = conv.z == ZRule::kQ2;
  const bool zbar_right_q2 = conv.zbar == ZbarRule::kMirrored ? z_left_q2 : !z_left_q2;
  if (v == Variable::kZ) {
    Rational c = QContext::qint(n, base_of(ctx, z_left_q2));
    // d^(r) psi(z) = (d^(l) psi)(q^2 z)
    if (side == Side::kRight) c *= ctx.q2pow(n - 1);
    return c;
  }
  Rational c = QContext::qint(n, base_of(ctx, zbar_right_q2));
  // mirror image: dz* z* = q^{-2} z* dz*
  if (side == Side::kLeft) c *= ctx.q2pow(n - 1);
  return c;
}

}  // namespace detail

/// d/dz or d/dz* applied from the given side. Mixed monomials are accepted
/// only in orderings where the differentiated letters sit on the side of the
/// differential; the one exception is the right z*-derivative of an
/// anti-normal word, where dz* is moved past psi(z) by dz* z = q^2 z dz*.
template <Scalar R>
OrderedElement<R> qderiv(const QContext& ctx, const OrderedElement<R>& p, Variable v, Side side,
                         const ConventionSet& conv) {
  const bool normal = p.ordering() == Ordering::kNormal;
  OrderedElement<R> out(p.ordering(), p.zero());
  for (const auto& [key, c] : p.terms()) {
    const auto [j, k] = key;
    // exponents of z and z* in this monomial
    const int nz = normal ? j : k;
    const int nzb = normal ? k : j;
    const int n = v == Variable::kZ ? nz : nzb;
    const int other = v == Variable::kZ ? nzb : nz;
    if (n == 0) continue;
    Rational factor = detail::power_derivative(ctx, v, side, n, conv);
    if (other != 0) {
      // the differentiated letter must be outermost on the differential's side
      const bool z_leftmost = normal;
      bool direct = false;
      if (v == Variable::kZ) direct = (side == Side::kLeft) == z_leftmost;
      else direct = (side == Side::kLeft) != z_leftmost;
      if (!direct) {
        if (v == Variable::kZStar && side == Side::kRight && !normal) {
          factor *= ctx.q2pow(other);
        } else {
          throw OrderIncompatible("derivative does not act directly on this ordering");
        }
      }
    }
    const int nj = normal ? (v == Variable::kZ ? j - 1 : j) : (v == Variable::kZStar ? j - 1 : j);
    const int nk = normal ? (v == Variable::kZ ? k : k - 1) : (v == Variable::kZStar ? k : k - 1);
    out.add(nj, nk, c * factor);
  }
  return out;
}

/// psi(z) -> psi(q^2 z) on a polynomial in z alone.
template <Scalar R>
OrderedElement<R> dilate_z(const QContext& ctx, const OrderedElement<R>& p) {
  OrderedElement<R> out(p.ordering(), p.zero());
  for (const auto& [key, c] : p.terms()) {
    const int nz = p.ordering() == Ordering::kNormal ? key.first : key.second;
    const int nzb = p.ordering() == Ordering::kNormal ? key.second : key.first;
    if (nzb != 0) throw OrderIncompatible("dilation defined on polynomials in z only");
    out.add(key.first, key.second, c * ctx.q2pow(nz));
  }
  return out;
}

/// Laplace-Beltrami operator on anti-normal polynomials:
/// box(z*^j z^k) = q^2 (d^(r) z*^j / dz*) (1 - zz*)^2 (d^(l) z^k / dz), evaluated
/// through the representation and returned normal-ordered.
inline OrderedElement<Rational> box_antinormal(const QContext& ctx,
                                               const OrderedElement<Rational>& f,
                                               const ConventionSet& conv) {
  if (f.ordering() != Ordering::kAntiNormal) throw OrderIncompatible("box expects anti-normal order");
  OrderedElement<Rational> out(Ordering::kNormal, Rational(0));
  for (const auto& [key, c] : f.terms()) {
    const auto [j, k] = key;
    if (j == 0 || k == 0) continue;
    const Rational cj = detail::power_derivative(ctx, Variable::kZStar, Side::kRight, j, conv);
    const Rational ck = detail::power_derivative(ctx, Variable::kZ, Side::kLeft, k, conv);
    const int deg = std::max(j, k) + 1;
    const std::size_t dim = static_cast<std::size_t>(2 * deg + 1 + std::max(j, k));
    auto left = to_matrix(ctx, OrderedElement<Rational>::monomial(Ordering::kNormal, 0, j - 1, Rational(1)), dim);
    auto right = to_matrix(ctx, OrderedElement<Rational>::monomial(Ordering::kNormal, k - 1, 0, Rational(1)), dim);
    auto radial = rep_radial_power(Rational(ctx.q2() * ctx.q2()), dim);
    OpMatrix<Rational> prod = left * radial * right;
    prod *= Rational(c * ctx.q2() * cj * ck);
    out += normal_order(ctx, prod, deg);
  }
  return out;
}

/// Sum of c * (z^a z*^b) (x) (z^c z*^d), both factors normal-ordered.
template <Scalar R>
class TensorElement {
 public:
  using Key = std::tuple<int, int, int, int>;

  explicit TensorElement(R zero) : zero_(std::move(zero)) {}

  static TensorElement pure(const OrderedElement<R>& left, const OrderedElement<R>& right) {
    if (left.ordering() != Ordering::kNormal || right.ordering() != Ordering::kNormal)
      throw OrderIncompatible("tensor factors must be normal-ordered");
    TensorElement t(left.zero());
    for (const auto& [kl, cl] : left.terms())
      for (const auto& [kr, cr] : right.terms()) t.add(kl.first, kl.second, kr.first, kr.second, cl * cr);
    return t;
  }

  const R& zero() const { return zero_; }
  const std::map<Key, R>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(int a, int b, int c, int d, const R& v) {
    if (qdisc::is_zero(v)) return;
    auto [it, inserted] = terms_.try_emplace({a, b, c, d}, v);
    if (!inserted) {
      it->second = it->second + v;
      if (qdisc::is_zero(it->second)) terms_.erase(it);
    }
  }

  TensorElement& operator+=(const TensorElement& o) {
    for (const auto& [k, v] : o.terms_) add(std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), v);
    return *this;
  }
  TensorElement& operator*=(const Rational& c) {
    TensorElement out(zero_);
    for (const auto& [k, v] : terms_) out.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), v * c);
    return *this = out;
  }
  friend bool operator==(const TensorElement& a, const TensorElement& b) { return a.terms_ == b.terms_; }

 private:
  R zero_;
  std::map<Key, R> terms_;
};

namespace detail {

/// q^{-2}(1 - (1+q^{-2}) z* (x) z + q^{-2} z*^2 (x) z^2), with the z* powers
/// appended to the left factor and the z powers prepended to the right one.
template <Scalar R>
TensorElement<R> box_prefactor(const QContext& ctx, const TensorElement<R>& e) {
  const Rational iq2 = 1 / ctx.q2();
  const std::array<Rational, 3> coef = {iq2, -iq2 * (1 + iq2), iq2 * iq2};
  TensorElement<R> out(e.zero());
  for (const auto& [key, v] : e.terms()) {
    const auto [a, b, c, d] = key;
    for (int s = 0; s < 3; ++s) out.add(a, b + s, c + s, d, v * coef[static_cast<std::size_t>(s)]);
  }
  return out;
}

/// d^(r)/dz* (x) d^(l)/dz on normal-ordered factors.
template <Scalar R>
TensorElement<R> tensor_derivative(const QContext& ctx, const TensorElement<R>& e,
                                   const ConventionSet& conv) {
  TensorElement<R> out(e.zero());
  for (const auto& [key, v] : e.terms()) {
    const auto [a, b, c, d] = key;
    if (b == 0 || c == 0) continue;
    Rational f = power_derivative(ctx, Variable::kZStar, Side::kRight, b, conv) *
                 power_derivative(ctx, Variable::kZ, Side::kLeft, c, conv);
    out.add(a, b - 1, c - 1, d, v * f);
  }
  return out;
}

}  // namespace detail

template <Scalar R>
TensorElement<R> box_tilde(const QContext& ctx, const TensorElement<R>& e, const ConventionSet& conv) {
  if (conv.prefactor == PrefactorOrder::kAfter)
    return detail::box_prefactor(ctx, detail::tensor_derivative(ctx, e, conv));
  return detail::tensor_derivative(ctx, detail::box_prefactor(ctx, e), conv);
}

/// m: psi1 (x) psi2 -> psi1 psi2, normal-ordered.
template <Scalar R>
OrderedElement<R> multiply_tensor(const QContext& ctx, const TensorElement<R>& e) {
  OrderedElement<R> out(Ordering::kNormal, e.zero());
  for (const auto& [key, v] : e.terms()) {
    const auto [a, b, c, d] = key;
    for (const auto& [km, w] : swap_zbar_z(ctx, b, c)) out.add(a + km.first, km.second + d, v * w);
  }
  return out;
}

/// m(P(box~) e) for a polynomial P.
template <Scalar R>
OrderedElement<R> apply_poly_box(const QContext& ctx, const Poly& p, const TensorElement<R>& e,
                                 const ConventionSet& conv) {
  OrderedElement<R> out(Ordering::kNormal, e.zero());
  TensorElement<R> power = e;
  for (int i = 0; i <= p.degree(); ++i) {
    if (i > 0) power = box_tilde(ctx, power, conv);
    if (power.is_zero()) break;
    if (sgn(p.coeff(i)) != 0) out += multiply_tensor(ctx, power) * lift(e.zero(), p.coeff(i));
  }
  return out;
}

}  // namespace qdisc
