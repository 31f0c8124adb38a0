#pragma once

// Matrix realization of the quantum disc through its faithful representation
// T on the basis v_m = z^m f_0:
//   T(z) v_m = v_{m+1},   T(z*) v_m = (1 - q^{2m}) v_{m-1},   T(f_n) v_m = delta_{nm} v_m.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qdisc/linsolve.hpp"
#include "qdisc/opmatrix.hpp"
#include "qdisc/ordered.hpp"
#include "qdisc/qscalar.hpp"

namespace qdisc {

inline OpMatrix<Rational> rep_z(std::size_t dim) {
  OpMatrix<Rational> m(dim, Rational(0));
  for (std::size_t i = 0; i + 1 < dim; ++i) m.at(i + 1, i) = 1;
  m.set_band(Band{-1, 1});
  return m;
}

inline OpMatrix<Rational> rep_zstar(const QContext& ctx, std::size_t dim) {
  OpMatrix<Rational> m(dim, Rational(0));
  for (std::size_t i = 1; i < dim; ++i) m.at(i - 1, i) = 1 - ctx.q2pow(static_cast<long>(i));
  m.set_band(Band{1, -1});
  return m;
}

inline OpMatrix<Rational> rep_f(std::size_t n, std::size_t dim) {
  if (n >= dim) throw IndexOutOfRange("f_" + std::to_string(n) + " needs dimension > n");
  OpMatrix<Rational> m(dim, Rational(0));
  m.at(n, n) = 1;
  m.set_band(Band{0, 0});
  m.set_support(n + 1);
  return m;
}

/// (1 - zz*)^lambda = sum_n s^n f_n with s = q^{2 lambda}; diagonal, not finite.
template <Scalar R>
OpMatrix<R> rep_radial_power(const R& s, std::size_t dim) {
  OpMatrix<R> m(dim, lift(s, Rational(0)));
  R p = lift(s, Rational(1));
  for (std::size_t n = 0; n < dim; ++n) {
    m.at(n, n) = p;
    p = p * s;
  }
  m.set_band(Band{0, 0});
  return m;
}

/// K^{-1} = diag(q^{-2n}), the weight of the quantum trace.
inline OpMatrix<Rational> rep_trace_weight(const QContext& ctx, std::size_t dim) {
  return rep_radial_power(Rational(1 / ctx.q2()), dim);
}

/// Powers A^0..A^n of a generator matrix.
template <Scalar R>
std::vector<OpMatrix<R>> matrix_powers(const OpMatrix<R>& a, int n) {
  std::vector<OpMatrix<R>> out;
  out.push_back(OpMatrix<R>::identity(a.dim(), a.zero()));
  for (int i = 1; i <= n; ++i) out.push_back(out.back() * a);
  return out;
}

/// (q^{2m}; q^{-2})_k, the action coefficient of z*^k on v_m.
inline Rational zstar_power_coeff(const QContext& ctx, int m, int k) {
  return qpoch(ctx.q2pow(m), 1 / ctx.q2(), k);
}

/// T of an ordered polynomial, from the closed form of each monomial's
/// action, so every stored entry is exact.
template <Scalar R>
OpMatrix<R> to_matrix(const QContext& ctx, const OrderedElement<R>& e, std::size_t dim) {
  const int deg = e.max_degree();
  if (static_cast<long>(dim) < deg + 1) {
    throw TruncationTooSmall("dimension " + std::to_string(dim) + " below degree+1 = " +
                             std::to_string(deg + 1));
  }
  OpMatrix<R> m(dim, e.zero());
  Band band{0, 0};
  bool first = true;
  const Rational inv_q2 = 1 / ctx.q2();
  for (const auto& [key, c] : e.terms()) {
    const auto [j, k] = key;
    const int shift = e.ordering() == Ordering::kNormal ? j - k : k - j;
    band = first ? Band{-shift, shift} : Band{std::max(band.lo, -shift), std::max(band.hi, shift)};
    first = false;
    for (int col = 0; col < static_cast<int>(dim); ++col) {
      const int row = col + shift;
      if (row < 0 || row >= static_cast<int>(dim)) continue;
      Rational w = e.ordering() == Ordering::kNormal ? qpoch(ctx.q2pow(col), inv_q2, k)
                                                     : qpoch(ctx.q2pow(col + k), inv_q2, j);
      if (sgn(w) == 0) continue;
      R& entry = m.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
      entry = entry + c * w;
    }
  }
  m.set_band(band);
  return m;
}

/// T of a finite function sum c z^j f_n z*^k: single entry per term at
/// (j+n, k+n) with value (q^{2(n+k)}; q^{-2})_k.
template <Scalar R>
OpMatrix<R> to_matrix(const QContext& ctx, const MixedElement<R>& e, std::size_t dim) {
  const std::size_t s = e.support();
  if (s > dim) {
    throw TruncationTooSmall("finite element support " + std::to_string(s) +
                             " exceeds dimension " + std::to_string(dim));
  }
  OpMatrix<R> m(dim, e.zero);
  for (const auto& [key, c] : e.terms) {
    const auto [j, n, k] = key;
    R& entry = m.at(static_cast<std::size_t>(j + n), static_cast<std::size_t>(k + n));
    entry = entry + c * zstar_power_coeff(ctx, n + k, k);
  }
  m.set_support(s);
  m.set_band(m.stored_band());
  return m;
}

template <Scalar R>
OpMatrix<R> to_matrix(const RadialElement<R>& e, std::size_t dim, const R& zero) {
  if (e.coeffs.size() > dim) throw TruncationTooSmall("radial element longer than dimension");
  OpMatrix<R> m(dim, zero);
  for (std::size_t n = 0; n < e.coeffs.size(); ++n) m.at(n, n) = e.coeffs[n];
  m.set_support(e.coeffs.size());
  m.set_band(Band{0, 0});
  return m;
}

/// Rewrites a finite element in the matrix-unit basis: each term becomes
/// z^{a-b} f_b (a >= b) or f_a z^{*(b-a)} (a < b) for its entry (a, b).
template <Scalar R>
MixedElement<R> canonical_mixed(const QContext& ctx, const MixedElement<R>& e) {
  std::map<std::pair<int, int>, R> units;
  for (const auto& [key, c] : e.terms) {
    const auto [j, n, k] = key;
    std::pair<int, int> pos{j + n, k + n};
    R v = c * zstar_power_coeff(ctx, n + k, k);
    auto [it, inserted] = units.try_emplace(pos, v);
    if (!inserted) it->second = it->second + v;
  }
  MixedElement<R> out(e.zero);
  for (const auto& [pos, v] : units) {
    const auto [a, b] = pos;
    if (a >= b) out.add(a - b, b, 0, v);
    else out.add(0, a, b - a, v * Rational(1 / zstar_power_coeff(ctx, b, b - a)));
  }
  return out;
}

enum class SolveMode {
  kExact,   // the operator must be exactly an element of degree <= max_deg
  kPrefix,  // coefficients with j, k <= max_deg of a possibly infinite expansion
};

namespace detail {

/// Per-diagonal forward substitution shared by the z- and hat-pictures.
/// coef(m, k) is the weight with which the monomial of right exponent k
/// contributes to column m; it vanishes for k > m, which makes each diagonal
/// lower triangular with pivots coef(m, m).
template <Scalar R, class CoefTable>
OrderedElement<R> triangular_normal_solve(const OpMatrix<R>& a, int max_deg,
                                          const CoefTable& coef, SolveMode mode) {
  const long rel = static_cast<long>(a.reliable());
  const long need = mode == SolveMode::kExact ? 2L * max_deg + 1 : max_deg + 1L;
  if (rel < need) {
    throw TruncationTooSmall("reliable block " + std::to_string(rel) + " < " +
                             std::to_string(need) + " needed for degree " +
                             std::to_string(max_deg));
  }
  OrderedElement<R> out(Ordering::kNormal, a.zero());
  for (int d = -max_deg; d <= max_deg; ++d) {
    const int e = std::max(0, -d);
    const int last = std::min(max_deg, max_deg - d);
    std::vector<R> x;
    for (int m = e; m <= last; ++m) {
      R rhs = a(static_cast<std::size_t>(m + d), static_cast<std::size_t>(m));
      for (int k = e; k < m; ++k) rhs = rhs - x[static_cast<std::size_t>(k - e)] * coef(m, k);
      const R& pivot = coef(m, m);
      x.push_back(rhs / pivot);
    }
    for (int k = e; k <= last; ++k) out.add(k + d, k, x[static_cast<std::size_t>(k - e)]);
    if (mode == SolveMode::kPrefix) continue;
    for (long m = last + 1; m < rel && m + d < rel; ++m) {
      R lhs = a.zero();
      for (int k = e; k <= last; ++k) lhs = lhs + x[static_cast<std::size_t>(k - e)] * coef(static_cast<int>(m), k);
      if (!(lhs == a(static_cast<std::size_t>(m + d), static_cast<std::size_t>(m)))) {
        throw NotBanded("diagonal " + std::to_string(d) + " needs degree above " +
                        std::to_string(max_deg) + " (column " + std::to_string(m) + ")");
      }
    }
  }
  if (mode == SolveMode::kExact) {
    for (long i = 0; i < rel; ++i) {
      for (long j = 0; j < rel; ++j) {
        if (std::abs(i - j) > max_deg && !is_zero(a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))) {
          throw NotBanded("entry outside diagonal band " + std::to_string(max_deg));
        }
      }
    }
  }
  return out;
}

/// Dense table of coef(m, k) for 0 <= k <= min(m, max_k), m < rows.
template <class R>
class CoefCache {
 public:
  template <class Fn>
  CoefCache(int rows, int max_k, const R& zero, Fn fn) : zero_(zero), rows_(rows), max_k_(max_k) {
    table_.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(max_k + 1));
    for (int m = 0; m < rows; ++m)
      for (int k = 0; k <= max_k; ++k) table_.push_back(k <= m ? fn(m, k) : zero);
  }
  const R& operator()(int m, int k) const {
    if (k > max_k_ || m >= rows_ || k > m) return zero_;
    return table_[static_cast<std::size_t>(m) * static_cast<std::size_t>(max_k_ + 1) + static_cast<std::size_t>(k)];
  }

 private:
  R zero_;
  int rows_;
  int max_k_;
  std::vector<R> table_;
};

}  // namespace detail

/// Normal-ordered coefficients a_jk (z^j z*^k) of the operator A. Column m of
/// diagonal d reads sum_k a_{k+d,k} (q^{2m}; q^{-2})_k.
template <Scalar R>
OrderedElement<R> normal_order(const QContext& ctx, const OpMatrix<R>& a, int max_deg,
                               SolveMode mode = SolveMode::kExact) {
  const Rational inv_q2 = 1 / ctx.q2();
  detail::CoefCache<R> coef(static_cast<int>(a.reliable()), max_deg, a.zero(), [&](int m, int k) {
    return lift(a.zero(), qpoch(ctx.q2pow(m), inv_q2, k));
  });
  return detail::triangular_normal_solve(a, max_deg, coef, mode);
}

/// Anti-normal coefficients a_jk (z*^j z^k). On the diagonal d = k - j the
/// row-r entry is sum_j a_{j,j+d} (q^{2(r+1)}; q^2)_j; this weight never
/// vanishes, so each diagonal is solved as a dense exact system over all
/// reliable rows.
template <Scalar R>
OrderedElement<R> anti_normal_order(const QContext& ctx, const OpMatrix<R>& a, int max_deg) {
  const long rel = static_cast<long>(a.reliable());
  if (rel < 2L * max_deg + 1) {
    throw TruncationTooSmall("reliable block " + std::to_string(rel) + " too small for degree " +
                             std::to_string(max_deg));
  }
  const Rational& q2 = ctx.q2();
  OrderedElement<R> out(Ordering::kAntiNormal, a.zero());
  for (int d = -max_deg; d <= max_deg; ++d) {
    const int first = std::max(0, -d);
    const int last = std::min(max_deg, max_deg - d);
    const std::size_t unknowns = static_cast<std::size_t>(last - first + 1);
    std::vector<std::vector<Rational>> coef;
    std::vector<R> rhs;
    for (long r = std::max(0, d); r < rel && r - d < rel; ++r) {
      std::vector<Rational> row;
      row.reserve(unknowns);
      for (int j = first; j <= last; ++j) row.push_back(qpoch(ctx.q2pow(r + 1), q2, j));
      coef.push_back(std::move(row));
      rhs.push_back(a(static_cast<std::size_t>(r), static_cast<std::size_t>(r - d)));
    }
    auto x = detail::solve_rational_system(std::move(coef), std::move(rhs), unknowns);
    if (!x) {
      throw NotBanded("diagonal " + std::to_string(d) + " is not an anti-normal polynomial of degree " +
                      std::to_string(max_deg));
    }
    for (int j = first; j <= last; ++j) out.add(j, j + d, (*x)[static_cast<std::size_t>(j - first)]);
  }
  for (long i = 0; i < rel; ++i)
    for (long j = 0; j < rel; ++j)
      if (std::abs(i - j) > max_deg && !is_zero(a(static_cast<std::size_t>(i), static_cast<std::size_t>(j))))
        throw NotBanded("entry outside diagonal band " + std::to_string(max_deg));
  return out;
}

/// T(f*) = G^{-1} T(f)^T G with G = diag((q^2;q^2)_m), the squared norms of
/// the orthogonal basis v_m.
template <Scalar R>
OpMatrix<R> adjoint(const QContext& ctx, const OpMatrix<R>& a) {
  const std::size_t n = a.dim();
  std::vector<Rational> g(n);
  Rational acc = 1;
  for (std::size_t m = 0; m < n; ++m) {
    g[m] = acc;
    acc *= 1 - ctx.q2pow(static_cast<long>(m) + 1);
  }
  OpMatrix<R> t = a.transpose();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!is_zero(t(i, j))) t.at(i, j) = t(i, j) * Rational(g[j] / g[i]);
  return t;
}

/// Invariant integral: (1 - q^2) tr T(f (1 - zz*)^{-1}) = (1 - q^2) sum_n F_nn q^{-2n}.
template <Scalar R>
R integrate_invariant(const QContext& ctx, const OpMatrix<R>& f) {
  if (!f.is_finite()) throw NotFinite("invariant integral needs a finite function");
  if (!f.fully_known()) throw TruncationTooSmall("finite support exceeds the reliable block");
  R acc = f.zero();
  for (std::size_t n = 0; n < *f.support(); ++n) {
    if (!is_zero(f(n, n))) acc = acc + f(n, n) * ctx.q2pow(-static_cast<long>(n));
  }
  return acc * Rational(1 - ctx.q2());
}

/// Weighted integral d nu_alpha at t = q^{4 alpha}: since
/// (1-zz*)^{2alpha+1} = diag(t^n q^{2n}), it equals (1 - t) sum_n F_nn t^n.
/// Non-finite operators are accepted only for a formal t, where terms beyond
/// the truncation order vanish.
template <Scalar R>
R integrate_weighted(const OpMatrix<R>& f, const R& t) {
  std::size_t terms = 0;
  if (f.fully_known()) {
    terms = *f.support();
  } else if (f.is_finite()) {
    throw TruncationTooSmall("finite support exceeds the reliable block");
  } else {
    if constexpr (std::is_same_v<R, TSeries>) {
      terms = static_cast<std::size_t>(t.order()) + 1;
      if (f.reliable() < terms) {
        throw TruncationTooSmall("reliable block " + std::to_string(f.reliable()) +
                                 " below series order + 1 = " + std::to_string(terms));
      }
    } else {
      throw NotFinite("weighted integral at numeric t needs a finite function");
    }
  }
  R acc = f.zero();
  R tn = lift(t, Rational(1));
  for (std::size_t n = 0; n < terms; ++n) {
    if (!is_zero(f(n, n))) acc = acc + f(n, n) * tn;
    tn = tn * t;
  }
  return (lift(t, Rational(1)) - t) * acc;
}

/// (f1, f2)_{q,alpha} = integral of f2* f1 against d nu_alpha.
template <Scalar R>
R inner_product(const QContext& ctx, const OpMatrix<R>& f1, const OpMatrix<R>& f2, const R& t) {
  return integrate_weighted(adjoint(ctx, f2) * f1, t);
}

/// Squared Hilbert-Schmidt norm in the orthonormalized basis,
/// sum_{m,n} |B_mn|^2 G_m / G_n.
inline Rational hilbert_schmidt_sq(const QContext& ctx, const OpMatrix<Rational>& b) {
  if (!b.fully_known()) throw NotFinite("Hilbert-Schmidt norm needs a finite operator");
  const std::size_t n = *b.support();
  std::vector<Rational> g(n);
  Rational acc = 1;
  for (std::size_t m = 0; m < n; ++m) {
    g[m] = acc;
    acc *= 1 - ctx.q2pow(static_cast<long>(m) + 1);
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(b(i, j)) != 0) sum += b(i, j) * b(i, j) * g[i] / g[j];
  return sum;
}

}  // namespace qdisc
