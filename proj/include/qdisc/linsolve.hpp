#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "qdisc/errors.hpp"
#include "qdisc/rational.hpp"
#include "qdisc/tseries.hpp"

namespace qdisc::detail {

/// Solves the (possibly overdetermined) system coef * x = rhs exactly, with
/// rational coefficients and right-hand sides in any scalar ring. Every
/// surplus equation must reduce to 0 = 0. Returns nullopt when the surplus
/// equations are inconsistent; throws SolveInconsistent on rank deficiency.
template <Scalar R>
std::optional<std::vector<R>> solve_rational_system(std::vector<std::vector<Rational>> coef,
                                                    std::vector<R> rhs, std::size_t unknowns) {
  const std::size_t rows = coef.size();
  if (rows < unknowns) throw TruncationTooSmall("fewer equations than unknowns");
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_of(unknowns);
  for (std::size_t col = 0; col < unknowns; ++col) {
    std::size_t p = pivot_row;
    while (p < rows && sgn(coef[p][col]) == 0) ++p;
    if (p == rows) throw SolveInconsistent("singular coefficient system");
    std::swap(coef[p], coef[pivot_row]);
    std::swap(rhs[p], rhs[pivot_row]);
    Rational inv = 1 / coef[pivot_row][col];
    for (std::size_t c = col; c < unknowns; ++c) coef[pivot_row][c] *= inv;
    rhs[pivot_row] = rhs[pivot_row] * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || sgn(coef[r][col]) == 0) continue;
      Rational f = coef[r][col];
      for (std::size_t c = col; c < unknowns; ++c) coef[r][c] -= f * coef[pivot_row][c];
      rhs[r] = rhs[r] - rhs[pivot_row] * f;
    }
    pivot_of[col] = pivot_row;
    ++pivot_row;
  }
  for (std::size_t r = pivot_row; r < rows; ++r) {
    if (!is_zero(rhs[r])) return std::nullopt;
  }
  std::vector<R> x;
  x.reserve(unknowns);
  for (std::size_t col = 0; col < unknowns; ++col) x.push_back(rhs[pivot_of[col]]);
  return x;
}

}  // namespace qdisc::detail
