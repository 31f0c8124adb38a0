#include <gtest/gtest.h>

#include "qdisc/bergman.hpp"
#include "support.hpp"

namespace qdisc {
namespace {

using testing::monomial;
using testing::Rng;

const QContext kCtx(make_rational(1, 2));
const QContext kCtx35(make_rational(3, 5));

OpMatrix<Rational> finite(const QContext& ctx, int j, int n, int k, std::size_t dim) {
  MixedElement<Rational> e(Rational(0));
  e.add(j, n, k, Rational(1));
  return to_matrix(ctx, e, dim);
}

TEST(WeightedSpace, Validation) {
  EXPECT_THROW(WeightedSpace<Rational>(kCtx, Rational(0), 4), ConfigInvalid);
  EXPECT_THROW(WeightedSpace<Rational>(kCtx, Rational(1), 4), ConfigInvalid);
  EXPECT_THROW(WeightedSpace<Rational>(kCtx, make_rational(1, 2), 1), ConfigInvalid);
  EXPECT_THROW(WeightedSpace<TSeries>(kCtx, TSeries(3, Rational(1)), 4), ConfigInvalid);
}

TEST(Gram, Values) {
  const WeightedSpace<Rational> sp(kCtx, make_rational(1, 4), 4);
  EXPECT_EQ(gram(sp, 0), 1);
  EXPECT_EQ(gram(sp, 1), make_rational(4, 5));
  const auto fs = formal_space(kCtx35, 3, 4);
  for (int m = 0; m <= 6; ++m) EXPECT_EQ(gram(fs, m)[0], qpoch(kCtx35.q2(), kCtx35.q2(), m));
}

TEST(HatGenerators, Entries) {
  const WeightedSpace<Rational> sp(kCtx, make_rational(1, 4), 6);
  const auto [z, zs] = hat_generators(sp);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(zs(i, 0), 0);
  EXPECT_EQ(zs(0, 1), make_rational(4, 5));
  EXPECT_EQ(z(1, 0), 1);
}

TEST(HatGenerators, ZStarIsAdjointOfShiftForGram) {
  // (zhat z^m, z^{m+1}) = (z^m, zhat* z^{m+1})
  const WeightedSpace<Rational> sp(kCtx35, make_rational(2, 7), 10);
  const auto [z, zs] = hat_generators(sp);
  for (int m = 0; m + 1 < 10; ++m)
    EXPECT_EQ(gram(sp, m + 1), zs(static_cast<std::size_t>(m), static_cast<std::size_t>(m + 1)) * gram(sp, m));
}

TEST(HatGenerators, DeformedCommutationRelation) {
  // zhat* zhat - q^2 zhat zhat* - (1 - q^2) = t (1 - q^2)/(1 - t) (1 - zhat zhat*)(1 - zhat* zhat)
  const Rational t = make_rational(1, 3);
  const std::size_t dim = 10;
  const WeightedSpace<Rational> sp(kCtx35, t, dim);
  const auto [z, zs] = hat_generators(sp);
  const Rational q2 = kCtx35.q2();
  const auto id = OpMatrix<Rational>::identity(dim, Rational(0));
  OpMatrix<Rational> lhs = zs * z;
  OpMatrix<Rational> zzs = z * zs;
  OpMatrix<Rational> tmp = zzs;
  tmp *= q2;
  lhs -= tmp;
  OpMatrix<Rational> c = id;
  c *= Rational(1 - q2);
  lhs -= c;
  OpMatrix<Rational> a = id;
  a -= zzs;
  OpMatrix<Rational> b = id;
  b -= zs * z;
  OpMatrix<Rational> rhs = a * b;
  rhs *= Rational(t * (1 - q2) / (1 - t));
  EXPECT_TRUE(block_equal(lhs, rhs, dim - 1));
}

TEST(Toeplitz, F0IsRankOne) {
  const Rational t = make_rational(1, 3);
  const WeightedSpace<Rational> sp(kCtx35, t, 4);
  const auto f0 = toeplitz(sp, rep_f(0, 4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(f0(i, j), i == 0 && j == 0 ? Rational(1 - t) : Rational(0));
}

TEST(Toeplitz, MatchesDefinitionThroughWeightedInnerProducts) {
  // Oracle: <P f z^j, z^m> / (z^m, z^m) with the weighted integral computed by hand.
  const Rational t = make_rational(2, 9);
  const std::size_t dim = 16;
  const WeightedSpace<Rational> sp(kCtx, t, dim);
  Rng rng(301);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = to_matrix(kCtx, testing::random_finite(rng, 5, 4), dim);
    const auto tf = toeplitz(sp, f);
    for (int m = 0; m < 5; ++m)
      for (int j = 0; j < 5; ++j) {
        const auto zj = to_matrix(kCtx, monomial(j, 0), dim);
        const auto zm = to_matrix(kCtx, monomial(m, 0), dim);
        const auto prod = adjoint(kCtx, zm) * f * zj;
        Rational acc = 0;
        for (std::size_t n = 0; n < 5; ++n) acc += prod(n, n) * ipow(t, static_cast<long>(n));
        const Rational g = qpoch(kCtx.q2(), kCtx.q2(), m) / qpoch(Rational(t * kCtx.q2()), kCtx.q2(), m);
        ASSERT_EQ(tf(static_cast<std::size_t>(m), static_cast<std::size_t>(j)), (1 - t) * acc / g);
      }
  }
}

TEST(Toeplitz, ThreeRoutesAgreeOnFiniteSymbols) {
  const WeightedSpace<Rational> sp(kCtx35, make_rational(1, 5), 8);
  for (int a = 0; a <= 3; ++a)
    for (int n = 0; n <= 2; ++n)
      for (int b = 0; b <= 3; ++b) {
        const auto f = finite(kCtx35, a, n, b, 6);
        const auto t1 = toeplitz(sp, f);
        ASSERT_TRUE(block_equal(t1, toeplitz_integral_form(sp, f), 8)) << a << n << b;
        ASSERT_TRUE(block_equal(t1, toeplitz_inner_product_form(sp, f), 8)) << a << n << b;
      }
}

TEST(Toeplitz, FormalTRoutesAgree) {
  const auto fs = formal_space(kCtx35, 3, 6);
  Rng rng(302);
  for (int i = 0; i < 5; ++i) {
    const auto f = lift_matrix(to_matrix(kCtx35, testing::random_finite(rng, 4, 3), 4), fs.t);
    ASSERT_TRUE(block_equal(toeplitz(fs, f), toeplitz_integral_form(fs, f), 6));
  }
}

TEST(Toeplitz, FiniteSymbolsGiveFiniteOperators) {
  Rng rng(303);
  const WeightedSpace<Rational> sp(kCtx, make_rational(1, 3), 12);
  for (int i = 0; i < 10; ++i) {
    const auto e = testing::random_finite(rng, 4, 3);
    const auto tf = toeplitz(sp, to_matrix(kCtx, e, 4));
    for (std::size_t r = 0; r < 12; ++r)
      for (std::size_t c = 0; c < 12; ++c)
        if (r >= 4 || c >= 4) {
          ASSERT_EQ(tf(r, c), 0);
        }
  }
  EXPECT_THROW(toeplitz(sp, rep_z(12)), NotFinite);
}

TEST(ToeplitzPolynomial, AntiNormalMonomialsAreHatProducts) {
  const auto fs = formal_space(kCtx35, 3, 14);
  const auto [z, zs] = hat_generators(fs);
  const auto zp = matrix_powers(z, 4);
  const auto zsp = matrix_powers(zs, 4);
  for (int j = 0; j <= 4; ++j)
    for (int k = 0; k <= 4; ++k) {
      const auto sym = OrderedElement<TSeries>::monomial(Ordering::kAntiNormal, j, k, TSeries(3, Rational(1)));
      const auto prod = zsp[static_cast<std::size_t>(j)] * zp[static_cast<std::size_t>(k)];
      ASSERT_TRUE(block_equal(toeplitz_polynomial(fs, sym), prod, prod.reliable())) << j << k;
    }
}

TEST(ToeplitzPolynomial, AdjointOfSymbolGivesGramAdjoint) {
  const std::size_t dim = 10;
  const WeightedSpace<Rational> sp(kCtx35, make_rational(1, 3), dim);
  for (int j = 0; j <= 3; ++j)
    for (int k = 0; k <= 3; ++k) {
      const auto a = toeplitz_polynomial(sp, monomial(j, k, Ordering::kAntiNormal));
      const auto b = toeplitz_polynomial(sp, monomial(k, j, Ordering::kAntiNormal));
      for (std::size_t r = 0; r + 4 < dim; ++r)
        for (std::size_t c = 0; c + 4 < dim; ++c)
          ASSERT_EQ(a(c, r) * gram(sp, static_cast<int>(c)), b(r, c) * gram(sp, static_cast<int>(r)));
    }
}

TEST(HatApply, IdentityAndSingleTerms) {
  const WeightedSpace<Rational> sp(kCtx, make_rational(1, 3), 12);
  for (int n = 0; n <= 5; ++n) {
    const auto col = hat_apply(sp, monomial(0, 0), n);
    for (int m = 0; m < static_cast<int>(col.size()); ++m) EXPECT_EQ(col[static_cast<std::size_t>(m)], m == n ? 1 : 0);
  }
  const Rational t = make_rational(1, 3);
  const Rational iq2 = 1 / kCtx.q2();
  for (int i = 0; i <= 3; ++i)
    for (int k = 0; k <= 3; ++k)
      for (int m = k; m <= 6; ++m) {
        const auto col = hat_apply(sp, monomial(i, k), m);
        const Rational expect = qpoch(kCtx.q2pow(m), iq2, k) / qpoch(Rational(t * kCtx.q2pow(m)), iq2, k);
        ASSERT_EQ(col[static_cast<std::size_t>(m - k + i)], expect);
      }
}

TEST(HatApply, AgreesWithGeneratorProducts) {
  const std::size_t dim = 16;
  const WeightedSpace<Rational> sp(kCtx35, make_rational(1, 4), dim);
  const auto [z, zs] = hat_generators(sp);
  const auto zp = matrix_powers(z, 3);
  const auto zsp = matrix_powers(zs, 3);
  Rng rng(304);
  for (int i = 0; i < 10; ++i) {
    const auto a = testing::random_ordered(rng, Ordering::kNormal, 3, 3);
    OpMatrix<Rational> m(dim, Rational(0));
    for (const auto& [key, c] : a.terms()) {
      OpMatrix<Rational> term = zp[static_cast<std::size_t>(key.first)] * zsp[static_cast<std::size_t>(key.second)];
      term *= c;
      m += term;
    }
    for (int n = 0; n <= 8; ++n) {
      const auto col = hat_apply(sp, a, n);
      for (std::size_t r = 0; r < col.size(); ++r) ASSERT_EQ(col[r], m(r, static_cast<std::size_t>(n)));
    }
    ASSERT_TRUE(block_equal(hat_to_matrix(sp, a), m, dim - 3));
  }
}

TEST(HatNormalOrder, RoundTripsFormalOperators) {
  const auto fs = formal_space(kCtx35, 4, 11);
  Rng rng(305);
  for (int i = 0; i < 30; ++i) {
    OrderedElement<TSeries> a(Ordering::kNormal, fs.zero());
    for (int n = 0; n < 4; ++n) a.add(rng.index(0, 5), rng.index(0, 5), testing::random_series(rng, 4));
    ASSERT_EQ(hat_normal_order(fs, hat_to_matrix(fs, a), 5), a);
  }
}

TEST(HatNormalOrder, ToeplitzOfF0) {
  // coefficient of zhat^k zhat*^k: (1 - t)(t^{-1} q^{-2}; q^2)_k / (q^2; q^2)_k (t q^2)^k
  //   = (1 - t) prod_{i<k} (t q^2 - q^{2i}) / (q^2; q^2)_k
  const int order = 5;
  const std::size_t dim = 12;
  const auto fs = formal_space(kCtx, order, dim);
  const auto op = toeplitz(fs, lift_matrix(rep_f(0, 2), fs.t));
  const auto a = hat_normal_order(fs, op, 5, SolveMode::kPrefix);
  const TSeries t = fs.t;
  for (int k = 0; k <= 5; ++k) {
    TSeries c = fs.one() - t;
    for (int i = 0; i < k; ++i) c *= t * kCtx.q2() - kCtx.q2pow(i) * fs.one();
    c /= qpoch(kCtx.q2(), kCtx.q2(), k);
    ASSERT_EQ(a.coeff(k, k), c) << k;
  }
}

TEST(HatNormalOrder, ZStarZConstantLayer) {
  const auto fs = formal_space(kCtx35, 2, 12);
  const auto [z, zs] = hat_generators(fs);
  const auto a = hat_normal_order(fs, zs * z, 4, SolveMode::kPrefix);
  EXPECT_EQ(a.coeff(0, 0)[0], 1 - kCtx35.q2());
  EXPECT_EQ(a.coeff(1, 1)[0], kCtx35.q2());
  for (int k = 2; k <= 4; ++k) EXPECT_EQ(a.coeff(k, k)[0], 0);
}

TEST(F0HatIdentity, DeltaAtSeveralParameters) {
  const std::vector<std::pair<Rational, Rational>> params = {
      {make_rational(1, 2), make_rational(1, 3)}, {make_rational(2, 3), make_rational(1, 5)}, {make_rational(9, 10), make_rational(1, 2)}};
  for (const auto& [q, t] : params) {
    const QContext ctx(q);
    for (int j = 0; j <= 20; ++j) ASSERT_TRUE(f0hat_identity_check(ctx, j, t)) << j;
  }
  EXPECT_EQ(f0hat_identity_sum(QContext(make_rational(9, 10)), 5, make_rational(1, 2)), 0);
}

TEST(ProjectGram, F0AndToeplitzColumn) {
  const Rational t = make_rational(1, 3);
  const WeightedSpace<Rational> sp(kCtx35, t, 8);
  const auto p = project_gram(sp, rep_f(0, 1));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], 1 - t);
  // P(f * 1) is the first column of the Toeplitz operator
  Rng rng(306);
  for (int i = 0; i < 10; ++i) {
    const auto f = to_matrix(kCtx35, testing::random_finite(rng, 5, 4), 5);
    const auto col = project_gram(sp, f);
    const auto tf = toeplitz(sp, f);
    for (std::size_t m = 0; m < col.size(); ++m) ASSERT_EQ(col[m], tf(m, 0));
  }
}

}  // namespace
}  // namespace qdisc
