#pragma once

#include <random>

#include "qdisc/discrep.hpp"

namespace qdisc::testing {

/// Seeded source of small rationals; every test owns its own seed.
class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}
  Rational rational() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    return make_rational(num(gen_), den(gen_));
  }
  Rational nonzero() {
    Rational r = rational();
    while (is_zero(r)) r = rational();
    return r;
  }
  int index(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937 gen_;
};

inline OrderedElement<Rational> random_ordered(Rng& rng, Ordering ord, int deg, int terms) {
  OrderedElement<Rational> e(ord, Rational(0));
  for (int i = 0; i < terms; ++i) e.add(rng.index(0, deg), rng.index(0, deg), rng.nonzero());
  return e;
}

/// Random z^j f_n z*^k combination whose matrix fits in [0, support)^2.
inline MixedElement<Rational> random_finite(Rng& rng, int support, int terms) {
  MixedElement<Rational> e(Rational(0));
  for (int i = 0; i < terms; ++i) {
    const int n = rng.index(0, support - 1);
    e.add(rng.index(0, support - 1 - n), n, rng.index(0, support - 1 - n), rng.nonzero());
  }
  return e;
}

inline TSeries random_series(Rng& rng, int order) {
  TSeries s(order);
  for (int i = 0; i <= order; ++i) s[i] = rng.rational();
  return s;
}

inline OrderedElement<Rational> monomial(int j, int k, Ordering ord = Ordering::kNormal) {
  return OrderedElement<Rational>::monomial(ord, j, k, Rational(1));
}

/// Dense matrix with independently computed entries; for oracle comparisons.
inline OpMatrix<Rational> dense(std::size_t dim, const auto& entry) {
  OpMatrix<Rational> m(dim, Rational(0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.at(i, j) = entry(i, j);
  return m;
}

}  // namespace qdisc::testing
