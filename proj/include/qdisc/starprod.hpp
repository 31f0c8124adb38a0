#pragma once

// The star product on Pol(C)_q[[t]] computed two ways: by composing operators
// through the injective map Q, and by the bidifferential expansion
// (1 - t) sum_j t^j m(p_j(box~) f1 (x) f2).

#include <sstream>
#include <string>
#include <vector>

#include "qdisc/berezin.hpp"
#include "qdisc/qderiv.hpp"

namespace qdisc {

using FormalElement = OrderedElement<TSeries>;

inline FormalElement to_formal(const OrderedElement<Rational>& e, int order) {
  FormalElement out(e.ordering(), TSeries(order));
  for (const auto& [key, c] : e.terms()) out.add(key.first, key.second, TSeries(order, c));
  return out;
}

/// 1 / (t q^{2m}; q^{-2})_k as the series sum_n (q^{2k};q^2)_n/(q^2;q^2)_n q^{2(m-k+1)n} t^n.
inline TSeries inverse_hat_denominator(const QContext& ctx, int m, int k, int order) {
  return qbinom_expand(ctx, ctx.q2pow(k), order).rescaled(ctx.q2pow(m - k + 1));
}

/// Q(f): z^j z^{*k} acts on z^m by (q^{2m};q^{-2})_k / (t q^{2m};q^{-2})_k z^{m-k+j}.
inline OpMatrix<TSeries> q_image(const QContext& ctx, const FormalElement& f, std::size_t dim) {
  const FormalElement g = reorder(ctx, f, Ordering::kNormal);
  const int order = g.zero().order();
  const int n = static_cast<int>(dim);
  if (n < std::max(g.max_degree(), 0) + 1) throw TruncationTooSmall("dimension below degree + 1");
  OpMatrix<TSeries> out(dim, g.zero());
  int lo = 0;
  int hi = 0;
  bool first = true;
  for (const auto& [key, c] : g.terms()) {
    const auto [j, k] = key;
    const int shift = j - k;
    lo = first ? -shift : std::max(lo, -shift);
    hi = first ? shift : std::max(hi, shift);
    first = false;
    for (int m = k; m < n && m + shift < n; ++m) {
      TSeries w = inverse_hat_denominator(ctx, m, k, order) * zstar_power_coeff(ctx, m, k);
      TSeries& e = out.at(static_cast<std::size_t>(m + shift), static_cast<std::size_t>(m));
      e = e + c * w;
    }
  }
  out.set_band(Band{lo, hi});
  return out;
}

/// Degree bound for f1 * f2 to the series order: z- and z*-degrees add and
/// each order of t raises both by at most one.
inline int star_degree_bound(const FormalElement& f1, const FormalElement& f2) {
  auto degrees = [](const FormalElement& f) {
    int dz = 0;
    int dzb = 0;
    for (const auto& [key, c] : f.terms()) {
      dz = std::max(dz, key.first);
      dzb = std::max(dzb, key.second);
    }
    return std::pair{dz, dzb};
  };
  const auto [a1, b1] = degrees(f1);
  const auto [a2, b2] = degrees(f2);
  return std::max(a1 + a2, b1 + b2) + f1.zero().order();
}

/// f1 * f2 = Q^{-1}(Q(f1) Q(f2)), solved exactly over the series ring.
inline FormalElement star_operator_route(const QContext& ctx, const FormalElement& f1, const FormalElement& f2,
                                         std::size_t dim, int max_deg) {
  const FormalElement g1 = reorder(ctx, f1, Ordering::kNormal);
  const FormalElement g2 = reorder(ctx, f2, Ordering::kNormal);
  if (g1.zero().order() != g2.zero().order()) throw OrderMismatch("factors have different series orders");
  const OpMatrix<TSeries> prod = q_image(ctx, g1, dim) * q_image(ctx, g2, dim);
  const WeightedSpace<TSeries> space(ctx, TSeries::variable(g1.zero().order()), dim);
  return hat_normal_order(space, prod, max_deg, SolveMode::kExact);
}

/// Operator route with truncations chosen from the degree bound.
inline FormalElement star_product(const QContext& ctx, const FormalElement& f1, const FormalElement& f2) {
  const FormalElement g1 = reorder(ctx, f1, Ordering::kNormal);
  const FormalElement g2 = reorder(ctx, f2, Ordering::kNormal);
  const int deg = star_degree_bound(g1, g2);
  const int reach = std::max({g1.max_offset(), g2.max_offset(), 0});
  const auto dim = static_cast<std::size_t>(2 * deg + 2 + reach);
  return star_operator_route(ctx, g1, g2, dim, deg);
}

/// c_k of B(z* z) = sum_k c_k z^k z^{*k}, from the triangular system
/// sum_k c_k (q^{2m};q^{-2})_k / (t q^{2m};q^{-2})_k = (1 - q^{2(m+1)}) / (1 - t q^{2(m+1)}).
inline std::vector<TSeries> c_series_solve(const QContext& ctx, int kmax, int order) {
  const auto space = formal_space(ctx, order, 2);
  std::vector<TSeries> c;
  for (int m = 0; m <= kmax; ++m) {
    const Rational s = ctx.q2pow(m + 1);
    TSeries rhs = divide(space.one() * Rational(1 - s), space.one() - space.t * s);
    for (int k = 0; k < m; ++k) rhs -= c[static_cast<std::size_t>(k)] * hat_weight(space, m, k);
    c.push_back(rhs / hat_weight(space, m, m));
  }
  return c;
}

/// u-coefficients of c(u) = 1 + sum_{j>=1} (t^j - t^{j-1}) q^{2j} (u;q^2)_j / (t q^2 u;q^2)_j.
/// Terms with j > order + 1 vanish modulo t^{order+1}.
inline std::vector<TSeries> c_series_closed(const QContext& ctx, int kmax, int order) {
  const Rational& q2 = ctx.q2();
  const TSeries t = TSeries::variable(order);
  const TSeries one(order, Rational(1));
  // polynomials in u with series coefficients, as coefficient vectors
  using UPoly = std::vector<TSeries>;
  auto mul = [&](const UPoly& a, const UPoly& b) {
    UPoly out(a.size() + b.size() - 1, TSeries(order));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  UPoly total{one};
  UPoly ratio{one};
  TSeries tj = one;
  for (int j = 1; j <= order + 1; ++j) {
    const int i = j - 1;
    // (1 - q^{2i} u) / (1 - t q^{2+2i} u), the inverse expanded to the order
    UPoly num{one, TSeries(order, Rational(-ctx.q2pow(i)))};
    UPoly inv{one};
    TSeries x = t * ctx.q2pow(i + 1);
    TSeries xp = one;
    for (int r = 1; r <= order; ++r) {
      xp *= x;
      inv.push_back(xp);
    }
    ratio = mul(mul(ratio, num), inv);
    const TSeries prev = tj;
    tj *= t;
    const TSeries scale = (tj - prev) * ipow(q2, j);
    if (total.size() < ratio.size()) total.resize(ratio.size(), TSeries(order));
    for (std::size_t k = 0; k < ratio.size(); ++k) total[k] += ratio[k] * scale;
  }
  std::vector<TSeries> out;
  for (int k = 0; k <= kmax; ++k)
    out.push_back(static_cast<std::size_t>(k) < total.size() ? total[static_cast<std::size_t>(k)] : TSeries(order));
  return out;
}

/// Triangular-solve coefficients, asserted equal to the closed form.
inline std::vector<TSeries> c_series(const QContext& ctx, int kmax, int order) {
  std::vector<TSeries> solved = c_series_solve(ctx, kmax, order);
  std::vector<TSeries> closed = c_series_closed(ctx, kmax, order);
  for (int k = 0; k <= kmax; ++k) {
    if (!(solved[static_cast<std::size_t>(k)] == closed[static_cast<std::size_t>(k)])) {
      std::ostringstream os;
      os << "c_" << k << ": solve " << solved[static_cast<std::size_t>(k)] << " vs closed form "
         << closed[static_cast<std::size_t>(k)];
      throw CrossCheckFailed(os.str());
    }
  }
  return solved;
}

/// f1 * f2 = (1 - t) sum_{j <= order} t^j m(p_j(box~) f1 (x) f2).
inline FormalElement star_asymptotic_route(const QContext& ctx, const OrderedElement<Rational>& f1,
                                           const OrderedElement<Rational>& f2, int order,
                                           const ConventionSet& conv) {
  const auto tensor = TensorElement<Rational>::pure(reorder(ctx, f1, Ordering::kNormal),
                                                    reorder(ctx, f2, Ordering::kNormal));
  FormalElement acc(Ordering::kNormal, TSeries(order));
  for (int j = 0; j <= order; ++j) {
    const OrderedElement<Rational> layer = apply_poly_box(ctx, p_poly(ctx, j), tensor, conv);
    for (const auto& [key, c] : layer.terms()) acc.add(key.first, key.second, TSeries::monomial(order, j, c));
  }
  TSeries one_minus_t = TSeries(order, Rational(1)) - TSeries::variable(order);
  return acc * one_minus_t;
}

struct RouteMismatch {
  int order;
  int j;
  int k;
  Rational operator_route;
  Rational asymptotic_route;
};

struct RouteReport {
  std::vector<RouteMismatch> mismatches;
  bool equal() const { return mismatches.empty(); }
};

inline RouteReport compare_routes(const QContext& ctx, const OrderedElement<Rational>& f1,
                                  const OrderedElement<Rational>& f2, int order, const ConventionSet& conv) {
  const FormalElement lhs = star_product(ctx, to_formal(f1, order), to_formal(f2, order));
  const FormalElement rhs = star_asymptotic_route(ctx, f1, f2, order, conv);
  std::map<std::pair<int, int>, bool> keys;
  for (const auto& [k, v] : lhs.terms()) keys[k] = true;
  for (const auto& [k, v] : rhs.terms()) keys[k] = true;
  RouteReport report;
  for (const auto& [key, unused] : keys) {
    const TSeries a = lhs.coeff(key.first, key.second);
    const TSeries b = rhs.coeff(key.first, key.second);
    for (int n = 0; n <= order; ++n)
      if (a[n] != b[n]) report.mismatches.push_back({n, key.first, key.second, a[n], b[n]});
  }
  return report;
}

struct CalibrationResult {
  std::vector<std::pair<ConventionSet, std::size_t>> residuals;  // mismatch count per convention
  std::vector<ConventionSet> matching;

  std::string table() const {
    std::ostringstream os;
    for (const auto& [conv, n] : residuals) os << conv.id() << ": " << n << " mismatches\n";
    return os.str();
  }
};

/// Runs every convention on the probes z* * z, z*^2 * z, z* * z^2, zz* * z*z.
inline CalibrationResult calibration_table(const QContext& ctx, int order) {
  const int n = std::min(order, 2);
  auto mono = [](int j, int k) { return OrderedElement<Rational>::monomial(Ordering::kNormal, j, k, Rational(1)); };
  const std::vector<std::pair<OrderedElement<Rational>, OrderedElement<Rational>>> probes = {
      {mono(0, 1), mono(1, 0)}, {mono(0, 2), mono(1, 0)}, {mono(0, 1), mono(2, 0)}, {mono(1, 1), reorder(ctx, OrderedElement<Rational>::monomial(Ordering::kAntiNormal, 1, 1, Rational(1)), Ordering::kNormal)}};
  CalibrationResult result;
  for (const ConventionSet& conv : ConventionSet::all()) {
    std::size_t bad = 0;
    for (const auto& [f1, f2] : probes) bad += compare_routes(ctx, f1, f2, n, conv).mismatches.size();
    result.residuals.emplace_back(conv, bad);
    if (bad == 0) result.matching.push_back(conv);
  }
  return result;
}

inline ConventionSet calibrate_convention(const QContext& ctx, int order) {
  const CalibrationResult r = calibration_table(ctx, order);
  if (r.matching.empty()) throw NoConventionMatches("\n" + r.table());
  if (r.matching.size() > 1) throw AmbiguousConvention("\n" + r.table());
  return r.matching.front();
}

}  // namespace qdisc
