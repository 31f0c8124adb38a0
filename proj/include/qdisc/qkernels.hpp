#pragma once

// Reproducing kernel of H^2_{q,alpha} and the kernel of P f P, for
// half-integer alpha, where every power of (1 - zz*) is an exact q-power.

#include <string>
#include <vector>

#include "qdisc/bergman.hpp"

namespace qdisc {

/// alpha = two_alpha / 2, so t = q^{4 alpha} = q^{2 two_alpha}.
class HalfIntWeight {
 public:
  HalfIntWeight(const QContext& ctx, int two_alpha) : ctx_(ctx), two_alpha_(two_alpha) {
    if (two_alpha < 1) throw ConfigInvalid("2 alpha must be a positive integer");
  }
  const QContext& ctx() const { return ctx_; }
  int two_alpha() const { return two_alpha_; }
  Rational t() const { return ctx_.q2pow(two_alpha_); }
  /// (1 - zz*)^{alpha + 1/2} = diag(q^{n(2 alpha + 1)}).
  Rational half_power_base() const { return ipow(ctx_.q(), two_alpha_ + 1); }
  WeightedSpace<Rational> space(std::size_t dim) const { return WeightedSpace<Rational>(ctx_, t(), dim); }

 private:
  QContext ctx_;
  int two_alpha_;
};

/// C_s in (z zeta*; q^2)^{-1}_{2 alpha + 1} = sum_s C_s (z zeta*)^s,
/// C_s = (q^{2(2 alpha + 1)}; q^2)_s / (q^2; q^2)_s.
inline std::vector<Rational> repro_kernel_coeffs(const HalfIntWeight& w, int smax) {
  const QContext& ctx = w.ctx();
  std::vector<Rational> out;
  for (int s = 0; s <= smax; ++s)
    out.push_back(qpoch(ctx.q2pow(w.two_alpha() + 1), ctx.q2(), s) / qpoch(ctx.q2(), ctx.q2(), s));
  return out;
}

/// Projection through the reproducing kernel: the coefficient of z^s is
/// C_s int zeta^{*s} psi d nu_alpha. Cross-checked against the Gram route.
inline std::vector<Rational> project_kernel(const HalfIntWeight& w, const OpMatrix<Rational>& psi) {
  const std::size_t s = detail::require_finite(psi);
  const std::size_t dim = 2 * s + 2;
  const OpMatrix<Rational> px = resize_finite(psi, dim);
  const auto c = repro_kernel_coeffs(w, static_cast<int>(s));
  const auto zs = matrix_powers(rep_zstar(w.ctx(), dim), static_cast<int>(s));
  const Rational t = w.t();
  std::vector<Rational> out;
  for (std::size_t k = 0; k < s; ++k) out.push_back(c[k] * integrate_weighted(zs[k] * px, t));
  const std::vector<Rational> gram_route = project_gram(w.space(std::max<std::size_t>(dim, 2)), px);
  if (gram_route != out) throw MismatchWithGram("kernel and Gram projections differ");
  return out;
}

struct PfpKernel {
  OpMatrix<Rational> moments;    // C_s C_r int zeta^{*s} f zeta^r d nu_alpha
  OpMatrix<Rational> coherent;   // (1-t)/(1-q^2) int k_zeta(q^2 z')^* k_zeta(z) f d nu
};

/// Kernel K_q(f; z, z') = sum_{s,r} K_sr z^s z'^{*r} of P f P, computed from
/// kernel moments and, independently, from the coherent vectors
/// k_zeta(z) = (1 - zeta zeta*)^{alpha+1/2} (zeta* z; q^2)^{-1}_{2 alpha+1}.
inline PfpKernel pfp_kernel(const HalfIntWeight& w, const OpMatrix<Rational>& f, int smax) {
  const QContext& ctx = w.ctx();
  const std::size_t s = detail::require_finite(f);
  const std::size_t dim = s + static_cast<std::size_t>(smax) + 2;
  const OpMatrix<Rational> fx = resize_finite(f, dim);
  const auto c = repro_kernel_coeffs(w, smax);
  const auto zp = matrix_powers(rep_z(dim), smax);
  const auto zs = matrix_powers(rep_zstar(ctx, dim), smax);
  const OpMatrix<Rational> d = rep_radial_power(w.half_power_base(), dim);
  const OpMatrix<Rational> dd = d * d;
  const Rational t = w.t();
  const Rational scale = (1 - t) / (1 - ctx.q2());
  const auto n = static_cast<std::size_t>(smax) + 1;
  PfpKernel k{OpMatrix<Rational>(n, Rational(0)), OpMatrix<Rational>(n, Rational(0))};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t r = 0; r < n; ++r) {
      const Rational cc = c[a] * c[r];
      k.moments.at(a, r) = cc * integrate_weighted(zs[a] * fx * zp[r], t);
      // k_zeta(q^2 z')^* contributes C_r q^{2r} z'^{*r} zeta^r (1 - zeta zeta*)^{alpha+1/2}
      k.coherent.at(a, r) = scale * cc * ctx.q2pow(static_cast<long>(r)) *
                            integrate_invariant(ctx, zp[r] * dd * zs[a] * fx);
    }
  }
  if (!block_equal(k.moments, k.coherent, n)) throw FactorizationMismatch("moment and coherent-vector kernels differ");
  return k;
}

/// Matrix of P f P on z^j read off the kernel: fhat_sj = K_sj (z^j, z^j)_{q,alpha}.
inline OpMatrix<Rational> kernel_operator(const HalfIntWeight& w, const OpMatrix<Rational>& kernel) {
  const auto sp = w.space(std::max<std::size_t>(kernel.dim(), 2));
  OpMatrix<Rational> out(kernel.dim(), Rational(0));
  for (std::size_t s = 0; s < kernel.dim(); ++s)
    for (std::size_t j = 0; j < kernel.dim(); ++j) out.at(s, j) = kernel(s, j) * gram(sp, static_cast<int>(j));
  return out;
}

}  // namespace qdisc
