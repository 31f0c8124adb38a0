#include <gtest/gtest.h>

#include "qdisc/qkernels.hpp"
#include "support.hpp"

namespace qdisc {
namespace {

using testing::Rng;

const QContext kCtx(make_rational(1, 2));
const QContext kCtx35(make_rational(3, 5));

TEST(HalfIntWeight, DerivedParameters) {
  const HalfIntWeight w(kCtx, 3);
  EXPECT_EQ(w.t(), make_rational(1, 64));
  EXPECT_EQ(w.half_power_base(), make_rational(1, 16));
  EXPECT_THROW(HalfIntWeight(kCtx, 0), ConfigInvalid);
}

TEST(ReproKernel, Coefficients) {
  EXPECT_EQ(repro_kernel_coeffs(HalfIntWeight(kCtx, 2), 0).front(), 1);
  EXPECT_EQ(repro_kernel_coeffs(HalfIntWeight(kCtx, 1), 1)[1], make_rational(5, 4));
}

TEST(ReproKernel, ReproducesPolynomials) {
  // C_s (z^s, z^s)_{q,alpha} = 1, so the kernel fixes every polynomial
  for (int two_alpha = 1; two_alpha <= 3; ++two_alpha) {
    const HalfIntWeight w(kCtx35, two_alpha);
    const auto c = repro_kernel_coeffs(w, 10);
    const auto sp = w.space(2);
    for (int s = 0; s <= 10; ++s) ASSERT_EQ(c[static_cast<std::size_t>(s)] * gram(sp, s), 1);
  }
}

TEST(ProjectKernel, F0AndZF0) {
  for (int two_alpha = 1; two_alpha <= 3; ++two_alpha) {
    const HalfIntWeight w(kCtx35, two_alpha);
    const auto p0 = project_kernel(w, rep_f(0, 1));
    ASSERT_EQ(p0.size(), 1u);
    EXPECT_EQ(p0[0], 1 - w.t());
    MixedElement<Rational> zf0(Rational(0));
    zf0.add(1, 0, 0, Rational(1));
    const auto p1 = project_kernel(w, to_matrix(kCtx35, zf0, 2));
    EXPECT_EQ(p1[0], 0);
    EXPECT_NE(p1[1], 0);
  }
}

TEST(ProjectKernel, AgreesWithGramOnRandomElements) {
  Rng rng(601);
  for (int two_alpha = 1; two_alpha <= 3; ++two_alpha) {
    const HalfIntWeight w(kCtx35, two_alpha);
    for (int i = 0; i < 20; ++i) {
      const auto psi = to_matrix(kCtx35, testing::random_finite(rng, 5, 3), 5);
      ASSERT_NO_THROW(project_kernel(w, psi));
    }
  }
}

TEST(PfpKernel, F0AndZero) {
  const HalfIntWeight w(kCtx, 2);
  const auto k = pfp_kernel(w, rep_f(0, 1), 4);
  for (std::size_t s = 0; s <= 4; ++s)
    for (std::size_t r = 0; r <= 4; ++r) EXPECT_EQ(k.moments(s, r), s == 0 && r == 0 ? Rational(1 - w.t()) : Rational(0));
  OpMatrix<Rational> zero(3, Rational(0));
  zero.set_support(3);
  const auto kz = pfp_kernel(w, zero, 4);
  for (std::size_t s = 0; s <= 4; ++s)
    for (std::size_t r = 0; r <= 4; ++r) EXPECT_EQ(kz.coherent(s, r), 0);
}

TEST(PfpKernel, MatrixElementsMatchToeplitzOperator) {
  Rng rng(602);
  for (int two_alpha = 1; two_alpha <= 3; ++two_alpha) {
    const HalfIntWeight w(kCtx35, two_alpha);
    for (int i = 0; i < 10; ++i) {
      const auto f = to_matrix(kCtx35, testing::random_finite(rng, 4, 3), 4);
      const auto k = pfp_kernel(w, f, 4);
      const auto op = kernel_operator(w, k.moments);
      const auto tf = toeplitz(w.space(op.dim()), resize_finite(f, op.dim()));
      ASSERT_TRUE(block_equal(op, tf, op.dim()));
    }
  }
}

TEST(PfpKernel, SelfAdjointSymbolGivesSymmetricKernel) {
  Rng rng(603);
  const HalfIntWeight w(kCtx35, 2);
  for (int i = 0; i < 10; ++i) {
    const auto g = to_matrix(kCtx35, testing::random_finite(rng, 4, 3), 4);
    OpMatrix<Rational> f = g;
    f += adjoint(kCtx35, g);
    const auto k = pfp_kernel(w, f, 4);
    for (std::size_t s = 0; s <= 4; ++s)
      for (std::size_t r = 0; r <= 4; ++r) ASSERT_EQ(k.moments(s, r), k.moments(r, s));
  }
}

}  // namespace
}  // namespace qdisc
