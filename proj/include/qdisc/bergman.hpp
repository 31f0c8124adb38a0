#pragma once

// Weighted Bergman space H^2_{q,alpha} in the monomial basis {z^m}, with the
// weight entering only through t = q^{4 alpha}.

#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "qdisc/discrep.hpp"

namespace qdisc {

template <Scalar R>
struct WeightedSpace {
  QContext ctx;
  R t;
  std::size_t dim;

  WeightedSpace(QContext c, R t_value, std::size_t m) : ctx(std::move(c)), t(std::move(t_value)), dim(m) {
    if (dim < 2) throw ConfigInvalid("Bergman truncation needs dim >= 2");
    if constexpr (std::is_same_v<R, Rational>) {
      if (sgn(t) <= 0 || t >= 1) throw ConfigInvalid("numeric t must satisfy 0 < t < 1");
    } else {
      if (sgn(t[0]) != 0) throw ConfigInvalid("formal t must have zero constant term");
    }
  }

  R zero() const { return lift(t, Rational(0)); }
  R one() const { return lift(t, Rational(1)); }
};

inline WeightedSpace<TSeries> formal_space(const QContext& ctx, int order, std::size_t dim) {
  return WeightedSpace<TSeries>(ctx, TSeries::variable(order), dim);
}

/// (z^m, z^m)_{q,alpha} = (q^2;q^2)_m / (q^2 t;q^2)_m.
template <Scalar R>
R gram(const WeightedSpace<R>& space, int m) {
  const Rational& q2 = space.ctx.q2();
  R den = qpoch<R>(space.t * q2, q2, m);
  return divide(space.one() * qpoch(q2, q2, m), den);
}

/// (q^{2m}; q^{-2})_k / (t q^{2m}; q^{-2})_k, the action weight of zhat^{*k} on z^m.
template <Scalar R>
R hat_weight(const WeightedSpace<R>& space, int m, int k) {
  if (k > m) return space.zero();
  const Rational iq2 = 1 / space.ctx.q2();
  const Rational s = space.ctx.q2pow(m);
  return divide(space.one() * qpoch(s, iq2, k), qpoch<R>(space.t * s, iq2, k));
}

/// zhat (shift) and zhat* (z^m -> (1 - q^{2m}) / (1 - t q^{2m}) z^{m-1}).
template <Scalar R>
std::pair<OpMatrix<R>, OpMatrix<R>> hat_generators(const WeightedSpace<R>& space) {
  OpMatrix<R> z = lift_matrix(rep_z(space.dim), space.t);
  OpMatrix<R> zs(space.dim, space.zero());
  for (std::size_t m = 1; m < space.dim; ++m) zs.at(m - 1, m) = hat_weight(space, static_cast<int>(m), 1);
  zs.set_band(Band{1, -1});
  return {std::move(z), std::move(zs)};
}

/// Matrix of sum a_ik zhat^i zhat^{*k}, one closed-form weight per term.
template <Scalar R>
OpMatrix<R> hat_to_matrix(const WeightedSpace<R>& space, const OrderedElement<R>& a) {
  if (a.ordering() != Ordering::kNormal) throw OrderIncompatible("hat operators are given normal-ordered");
  const int n = static_cast<int>(space.dim);
  OpMatrix<R> out(space.dim, space.zero());
  int lo = 0;
  int hi = 0;
  bool first = true;
  for (const auto& [key, c] : a.terms()) {
    const auto [i, k] = key;
    const int shift = i - k;
    lo = first ? -shift : std::max(lo, -shift);
    hi = first ? shift : std::max(hi, shift);
    first = false;
    for (int m = k; m < n && m + shift < n; ++m) {
      if (m + shift < 0) continue;
      R& e = out.at(static_cast<std::size_t>(m + shift), static_cast<std::size_t>(m));
      e = e + c * hat_weight(space, m, k);
    }
  }
  out.set_band(Band{lo, hi});
  return out;
}

/// Column n of the operator sum a_ik zhat^i zhat^{*k}:
/// b_mn = sum_j (q^{2n};q^{-2})_{n-j} / (t q^{2n};q^{-2})_{n-j} a_{m-j,n-j}.
template <Scalar R>
std::vector<R> hat_apply(const WeightedSpace<R>& space, const OrderedElement<R>& a, int n) {
  if (a.ordering() != Ordering::kNormal) throw OrderIncompatible("hat operators are given normal-ordered");
  const int deg = std::max(a.max_degree(), 0);
  std::vector<R> col(static_cast<std::size_t>(n + deg + 1), space.zero());
  std::vector<R> weight;
  for (int r = 0; r <= n; ++r) weight.push_back(hat_weight(space, n, r));
  for (int m = 0; m <= n + deg; ++m) {
    R acc = space.zero();
    for (int j = 0; j <= std::min(m, n); ++j) {
      const R c = a.coeff(m - j, n - j);
      if (!is_zero(c)) acc = acc + weight[static_cast<std::size_t>(n - j)] * c;
    }
    col[static_cast<std::size_t>(m)] = acc;
  }
  return col;
}

/// Normal-ordered zhat-coefficients of a banded operator on C[z]_{q,alpha}.
template <Scalar R>
OrderedElement<R> hat_normal_order(const WeightedSpace<R>& space, const OpMatrix<R>& a, int max_deg,
                                   SolveMode mode = SolveMode::kExact) {
  const int rows = static_cast<int>(a.reliable());
  // incremental ratio: w(m,k) = w(m,k-1) (1 - q^{2(m-k+1)}) / (1 - t q^{2(m-k+1)})
  std::vector<std::vector<R>> table(static_cast<std::size_t>(rows));
  for (int m = 0; m < rows; ++m) {
    auto& row = table[static_cast<std::size_t>(m)];
    row.push_back(space.one());
    for (int k = 1; k <= std::min(m, max_deg); ++k) {
      const Rational s = space.ctx.q2pow(m - k + 1);
      R step = divide(space.one() * Rational(1 - s), space.one() - space.t * s);
      row.push_back(row.back() * step);
    }
  }
  detail::CoefCache<R> coef(rows, max_deg, space.zero(), [&](int m, int k) {
    return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  });
  return detail::triangular_normal_solve(a, max_deg, coef, mode);
}

namespace detail {

template <Scalar R>
std::size_t require_finite(const OpMatrix<R>& f) {
  if (!f.is_finite()) throw NotFinite("symbol is not a finite function");
  if (!f.fully_known()) throw TruncationTooSmall("symbol support exceeds its reliable block");
  return *f.support();
}

/// z^j D z^{*m} for all j, m < s with D diagonal, reusing generator powers.
template <Scalar R>
class SandwichTable {
 public:
  SandwichTable(const QContext& ctx, const OpMatrix<R>& diag, std::size_t s)
      : zp_(matrix_powers(lift_matrix(rep_z(diag.dim()), diag.zero()), static_cast<int>(s))),
        zsp_(matrix_powers(lift_matrix(rep_zstar(ctx, diag.dim()), diag.zero()), static_cast<int>(s))),
        diag_(diag) {}

  OpMatrix<R> get(int j, int m) const {
    OpMatrix<R> x = zp_[static_cast<std::size_t>(j)] * diag_ * zsp_[static_cast<std::size_t>(m)];
    return x;
  }

 private:
  std::vector<OpMatrix<R>> zp_;
  std::vector<OpMatrix<R>> zsp_;
  OpMatrix<R> diag_;
};

/// tr(X F) over the block where F lives.
template <Scalar R>
R trace_product(const OpMatrix<R>& x, const OpMatrix<R>& f, std::size_t s) {
  if (x.reliable() < s) throw TruncationTooSmall("sandwich matrix not reliable on the symbol support");
  R acc = f.zero();
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < s; ++k)
      if (!is_zero(f(k, i)) && !is_zero(x(i, k))) acc = acc + x(i, k) * f(k, i);
  return acc;
}

template <Scalar R>
OpMatrix<R> finite_result(const WeightedSpace<R>& space, std::size_t s) {
  if (space.dim < s) {
    throw TruncationTooSmall("space dimension " + std::to_string(space.dim) + " below symbol support " +
                             std::to_string(s));
  }
  OpMatrix<R> out(space.dim, space.zero());
  out.set_support(s);
  return out;
}

}  // namespace detail

/// Toeplitz operator of a finite symbol by the trace formula
/// fhat_mj = (q^2 t;q^2)_m / (q^2;q^2)_m (1 - t) tr(T(z^j (1-zz*)^{2 alpha} z^{*m}) T(f)),
/// where (1-zz*)^{2 alpha} = diag(t^n). Supported on the same block as f.
template <Scalar R>
OpMatrix<R> toeplitz(const WeightedSpace<R>& space, const OpMatrix<R>& f) {
  const std::size_t s = detail::require_finite(f);
  OpMatrix<R> out = detail::finite_result(space, s);
  const std::size_t dim = 2 * s + 2;
  OpMatrix<R> fx = resize_finite(f, dim);
  detail::SandwichTable<R> table(space.ctx, rep_radial_power(space.t, dim), s);
  for (int m = 0; m < static_cast<int>(s); ++m) {
    const R scale = divide(space.one() - space.t, gram(space, m));
    for (int j = 0; j < static_cast<int>(s); ++j) {
      R tr = detail::trace_product(table.get(j, m), fx, s);
      if (!is_zero(tr)) out.at(static_cast<std::size_t>(m), static_cast<std::size_t>(j)) = tr * scale;
    }
  }
  out.set_band(out.stored_band());
  return out;
}

/// Same matrix from the integral representation against d nu:
/// fhat_mj = (1-t)/(1-q^2) (q^2 t;q^2)_m/(q^2;q^2)_m q^{2j} int z^j (1-zz*)^{2 alpha+1} z^{*m} f d nu.
template <Scalar R>
OpMatrix<R> toeplitz_integral_form(const WeightedSpace<R>& space, const OpMatrix<R>& f) {
  const std::size_t s = detail::require_finite(f);
  OpMatrix<R> out = detail::finite_result(space, s);
  const std::size_t dim = 3 * s + 2;
  OpMatrix<R> fx = resize_finite(f, dim);
  const Rational& q2 = space.ctx.q2();
  detail::SandwichTable<R> table(space.ctx, rep_radial_power(R(space.t * q2), dim), s);
  for (int m = 0; m < static_cast<int>(s); ++m) {
    const R scale = divide(space.one() - space.t, gram(space, m) * Rational(1 - q2));
    for (int j = 0; j < static_cast<int>(s); ++j) {
      R v = integrate_invariant(space.ctx, table.get(j, m) * fx);
      if (!is_zero(v)) out.at(static_cast<std::size_t>(m), static_cast<std::size_t>(j)) = v * scale * space.ctx.q2pow(j);
    }
  }
  out.set_band(out.stored_band());
  return out;
}

/// Same matrix as (f z^j, z^m)_{q,alpha} / (z^m, z^m)_{q,alpha}.
template <Scalar R>
OpMatrix<R> toeplitz_inner_product_form(const WeightedSpace<R>& space, const OpMatrix<R>& f) {
  const std::size_t s = detail::require_finite(f);
  OpMatrix<R> out = detail::finite_result(space, s);
  const std::size_t dim = 2 * s + 2;
  OpMatrix<R> fx = resize_finite(f, dim);
  auto zp = matrix_powers(lift_matrix(rep_z(dim), space.t), static_cast<int>(s));
  for (int m = 0; m < static_cast<int>(s); ++m) {
    for (int j = 0; j < static_cast<int>(s); ++j) {
      R v = inner_product(space.ctx, fx * zp[static_cast<std::size_t>(j)], zp[static_cast<std::size_t>(m)], space.t);
      if (!is_zero(v)) out.at(static_cast<std::size_t>(m), static_cast<std::size_t>(j)) = divide(v, gram(space, m));
    }
  }
  out.set_band(out.stored_band());
  return out;
}

/// Toeplitz operator of a polynomial symbol: z^{*j} z^k -> zhat^{*j} zhat^k.
/// Normal-ordered input is rewritten anti-normally first.
template <Scalar R>
OpMatrix<R> toeplitz_polynomial(const WeightedSpace<R>& space, const OrderedElement<R>& symbol) {
  const OrderedElement<R> anti = reorder(space.ctx, symbol, Ordering::kAntiNormal);
  const int n = static_cast<int>(space.dim);
  OpMatrix<R> out(space.dim, space.zero());
  int lo = 0;
  int hi = 0;
  bool first = true;
  for (const auto& [key, c] : anti.terms()) {
    const auto [j, k] = key;
    const int shift = k - j;
    lo = first ? -shift : std::max(lo, -shift);
    hi = first ? shift : std::max(hi, shift);
    first = false;
    for (int m = 0; m < n; ++m) {
      const int row = m + shift;
      if (row < 0 || row >= n) continue;
      R& e = out.at(static_cast<std::size_t>(row), static_cast<std::size_t>(m));
      e = e + c * hat_weight(space, m + k, j);
    }
  }
  out.set_band(Band{lo, hi});
  return out;
}

/// The finite sum sum_k (t^{-1}q^{-2};q^2)_k/(q^2;q^2)_k (q^{2j};q^{-2})_k/(t q^{2j};q^{-2})_k (t q^2)^k,
/// which should equal delta_{j0}.
inline Rational f0hat_identity_sum(const QContext& ctx, int j, const Rational& t) {
  if (j < 0) throw IndexOutOfRange("identity index must be >= 0");
  const Rational& q2 = ctx.q2();
  const Rational iq2 = 1 / q2;
  const Rational a = 1 / (t * q2);
  Rational sum = 0;
  for (int k = 0; k <= j; ++k) {
    Rational term = qpoch(a, q2, k) / qpoch(q2, q2, k);
    term *= qpoch(ctx.q2pow(j), iq2, k) / qpoch(Rational(t * ctx.q2pow(j)), iq2, k);
    term *= ipow(Rational(t * q2), k);
    sum += term;
  }
  return sum;
}

inline bool f0hat_identity_check(const QContext& ctx, int j, const Rational& t) {
  return f0hat_identity_sum(ctx, j, t) == (j == 0 ? 1 : 0);
}

/// First coefficients of the orthogonal projection P_{q,alpha} f of a finite
/// function: (f, z^m)_{q,alpha} / (z^m, z^m)_{q,alpha}. Coefficients with m
/// at or beyond the support vanish and are omitted.
template <Scalar R>
std::vector<R> project_gram(const WeightedSpace<R>& space, const OpMatrix<R>& f) {
  const std::size_t s = detail::require_finite(f);
  const std::size_t dim = 2 * s + 2;
  OpMatrix<R> fx = resize_finite(f, dim);
  auto zp = matrix_powers(lift_matrix(rep_z(dim), space.t), static_cast<int>(s));
  std::vector<R> out;
  for (std::size_t m = 0; m < s; ++m)
    out.push_back(divide(inner_product(space.ctx, fx, zp[m], space.t), gram(space, static_cast<int>(m))));
  return out;
}

}  // namespace qdisc
