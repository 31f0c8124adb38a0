#pragma once

// Covariant symbols, the quantum trace and the Berezin transform, plus the
// polynomials p_j of the t-expansion of the Berezin transform.

#include <string>
#include <utility>
#include <vector>

#include "qdisc/bergman.hpp"
#include "qdisc/poly.hpp"

namespace qdisc {

/// tr_q(A) = tr(A K^{-1}) = sum_k a_kk q^{-2k}.
template <Scalar R>
R trace_q(const QContext& ctx, const OpMatrix<R>& a) {
  const std::size_t s = detail::require_finite(a);
  R acc = a.zero();
  for (std::size_t k = 0; k < s; ++k)
    if (!is_zero(a(k, k))) acc = acc + a(k, k) * ctx.q2pow(-static_cast<long>(k));
  return acc;
}

/// Covariant symbol through the trace pairing:
/// f = sum_{j,m} fhat_jm (q^2 t;q^2)_m/(q^2;q^2)_m z^j (1-zz*)^{2 alpha+1} z^{*m},
/// with (1-zz*)^{2 alpha+1} = sum_n (t q^2)^n f_n cut at n <= nf.
template <Scalar R>
MixedElement<R> covariant_symbol_trace(const WeightedSpace<R>& space, const OpMatrix<R>& op, int nf) {
  const std::size_t s = detail::require_finite(op);
  if (nf < 0) throw TruncationTooSmall("f-order must be >= 0");
  std::vector<R> radial;
  R p = space.one();
  const R step = space.t * space.ctx.q2();
  for (int n = 0; n <= nf; ++n) {
    radial.push_back(p);
    p = p * step;
  }
  MixedElement<R> out(space.zero());
  for (std::size_t m = 0; m < s; ++m) {
    const R inv_gram = divide(space.one(), gram(space, static_cast<int>(m)));
    for (std::size_t j = 0; j < s; ++j) {
      if (is_zero(op(j, m))) continue;
      const R c = op(j, m) * inv_gram;
      for (int n = 0; n <= nf; ++n) out.add(static_cast<int>(j), n, static_cast<int>(m), c * radial[static_cast<std::size_t>(n)]);
    }
  }
  return out;
}

/// Covariant symbol by coefficient transfer: if op = sum a_jk zhat^j zhat^{*k}
/// then its symbol is sum a_jk z^j z^{*k}.
template <Scalar R>
OrderedElement<R> covariant_symbol_normal(const WeightedSpace<R>& space, const OpMatrix<R>& op, int max_deg,
                                          SolveMode mode = SolveMode::kExact) {
  return hat_normal_order(space, op, max_deg, mode);
}

/// Compares the two symbol routes for a finite operator on the matrix block
/// [0, min(max_deg, nf)], where both truncations are exact.
template <Scalar R>
bool symbol_routes_agree(const WeightedSpace<R>& space, const OpMatrix<R>& op, int max_deg, int nf) {
  const MixedElement<R> r1 = covariant_symbol_trace(space, op, nf);
  const OrderedElement<R> r2 = covariant_symbol_normal(space, op, max_deg, SolveMode::kPrefix);
  const std::size_t block = static_cast<std::size_t>(std::min(max_deg, nf)) + 1;
  const std::size_t dim = std::max<std::size_t>(r1.support(), static_cast<std::size_t>(max_deg) + 1);
  OpMatrix<R> m1 = to_matrix(space.ctx, r1, dim);
  OpMatrix<R> m2 = to_matrix(space.ctx, r2, dim);
  return block_equal(m1, m2, block);
}

/// Berezin transform of a finite function, as a truncated finite expansion.
template <Scalar R>
MixedElement<R> berezin(const WeightedSpace<R>& space, const OpMatrix<R>& f, int nf) {
  return covariant_symbol_trace(space, toeplitz(space, f), nf);
}

/// Berezin transform of a polynomial symbol, normal-ordered. With formal t
/// the result is a polynomial of degree <= deg(f) + order + 1 at every order.
inline OrderedElement<TSeries> berezin_polynomial(const WeightedSpace<TSeries>& space,
                                                  const OrderedElement<TSeries>& f) {
  const int deg = std::max(f.max_degree(), 0) + space.t.order() + 1;
  if (space.dim < static_cast<std::size_t>(2 * deg + 1)) {
    throw TruncationTooSmall("Berezin transform of degree " + std::to_string(f.max_degree()) +
                             " needs dimension >= " + std::to_string(2 * deg + 1));
  }
  return hat_normal_order(space, toeplitz_polynomial(space, f), deg, SolveMode::kExact);
}

/// p_j(X) = sum_k (q^{-2j};q^2)_k / (q^2;q^2)_k^2 q^{2k}
///          prod_{i<k} (1 - q^{2i}((1-q^2)^2 X + 1 + q^2) + q^{4i+2}).
inline Poly p_poly(const QContext& ctx, int j) {
  if (j < 0) throw IndexOutOfRange("p_j needs j >= 0");
  const Rational& q2 = ctx.q2();
  const Rational w = (1 - q2) * (1 - q2);
  Poly sum;
  Poly prod = Poly::constant(1);
  for (int k = 0; k <= j; ++k) {
    if (k > 0) {
      const int i = k - 1;
      const Rational qi = ctx.q2pow(i);
      Poly factor({Rational(1 - qi * (1 + q2) + ctx.q2pow(2 * i + 1)), Rational(-qi * w)});
      prod = prod * factor;
    }
    const Rational den = qpoch(q2, q2, k);
    Rational c = qpoch(ctx.q2pow(-j), q2, k) / (den * den) * ctx.q2pow(k);
    sum += prod * c;
  }
  return sum;
}

/// Operator coefficient of t^n in the expansion of the Berezin transform:
/// identity for n = 0, p_n - p_{n-1} otherwise.
inline Poly expansion_coeffs(const QContext& ctx, int n) {
  if (n < 0) throw IndexOutOfRange("expansion order must be >= 0");
  if (n == 0) return Poly::constant(1);
  return p_poly(ctx, n) - p_poly(ctx, n - 1);
}

/// Berezin transform of f_0 against (1 - t) sum_j t^j q^{2j} f_j, to orders
/// (order, nf), with t formal.
inline bool expansion_check_f0(const QContext& ctx, int order, int nf) {
  const auto space = formal_space(ctx, order, static_cast<std::size_t>(nf) + 2);
  OpMatrix<TSeries> f0 = lift_matrix(rep_f(0, 2), space.t);
  const MixedElement<TSeries> b = canonical_mixed(ctx, berezin(space, f0, nf));
  MixedElement<TSeries> expect(space.zero());
  for (int j = 0; j <= nf; ++j) {
    TSeries c = (space.one() - space.t) * TSeries::monomial(order, j, ctx.q2pow(j));
    expect.add(0, j, 0, c);
  }
  return b.terms == expect.terms;
}

/// Both sides of the duality int B(f) psi d nu = (1-q^2)/(1-t) tr_q(fhat psihat)
/// for finite f and psi.
template <Scalar R>
std::pair<R, R> duality_sides(const WeightedSpace<R>& space, const OpMatrix<R>& f, const OpMatrix<R>& psi) {
  const std::size_t sf = detail::require_finite(f);
  const std::size_t sp = detail::require_finite(psi);
  const int nf = static_cast<int>(sp);
  const MixedElement<R> b = berezin(space, f, nf);
  const std::size_t dim = std::max(b.support(), sp);
  const OpMatrix<R> bm = to_matrix(space.ctx, b, dim);
  const OpMatrix<R> pm = resize_finite(psi, dim);
  // only the block [0, sp)^2 of T(B f) meets psi; it is exact because nf >= sp - 1
  R lhs = space.zero();
  for (std::size_t i = 0; i < sp; ++i) {
    R diag = space.zero();
    for (std::size_t k = 0; k < sp; ++k)
      if (!is_zero(pm(k, i))) diag = diag + bm(i, k) * pm(k, i);
    if (!is_zero(diag)) lhs = lhs + diag * space.ctx.q2pow(-static_cast<long>(i));
  }
  lhs = lhs * Rational(1 - space.ctx.q2());
  const std::size_t sdim = std::max({space.dim, sf, sp});
  WeightedSpace<R> wide(space.ctx, space.t, sdim);
  const OpMatrix<R> prod = toeplitz(wide, f) * toeplitz(wide, psi);
  R rhs = divide(trace_q(space.ctx, prod) * Rational(1 - space.ctx.q2()), space.one() - space.t);
  return {lhs, rhs};
}

}  // namespace qdisc
