#pragma once

// Verification suites run by the command-line tool. Each check yields one
// record; suites never throw for a failed identity, only for bad input.

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/qkernels.hpp"
#include "qdisc/starprod.hpp"

namespace qdisc::cli {

struct RunConfig {
  Rational q = make_rational(3, 5);
  std::optional<Rational> t;  // nullopt: formal
  int nt = 4;
  int m = 32;
  int nf = 10;
  int s = 4;
  std::string convention = "calibrate";
  std::vector<std::string> suites{"all"};
  std::string out;
  bool timing = false;
};

struct Check {
  std::string id;
  std::string paper_ref;
  std::string status;  // pass | fail | skip
  std::string detail;
  std::optional<double> millis;
};

class Recorder {
 public:
  explicit Recorder(bool timing) : timing_(timing) {}

  /// Runs fn, which returns "" on success or a failure description.
  void run(const std::string& id, const std::string& ref, const std::function<std::string()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Check c{id, ref, "pass", "", std::nullopt};
    try {
      c.detail = fn();
      if (!c.detail.empty()) c.status = "fail";
    } catch (const Error& e) {
      c.status = "fail";
      c.detail = e.what();
    }
    if (timing_) {
      c.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    checks_.push_back(std::move(c));
  }
  void skip(const std::string& id, const std::string& ref, const std::string& why) {
    checks_.push_back({id, ref, "skip", why, std::nullopt});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  bool timing_;
  std::vector<Check> checks_;
};

inline std::string mismatch(const std::string& what, const auto& lhs, const auto& rhs) {
  std::ostringstream os;
  os << what << ": " << lhs << " != " << rhs;
  return os.str();
}

/// Deterministic small rationals for randomized checks.
class RationalSource {
 public:
  explicit RationalSource(unsigned seed) : gen_(seed) {}
  Rational next() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    return make_rational(num(gen_), den(gen_));
  }
  int index(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937 gen_;
};

inline OrderedElement<Rational> random_ordered(RationalSource& src, Ordering ord, int deg, int terms) {
  OrderedElement<Rational> e(ord, Rational(0));
  for (int i = 0; i < terms; ++i) e.add(src.index(0, deg), src.index(0, deg), src.next());
  return e;
}

inline MixedElement<Rational> random_finite(RationalSource& src, int support, int terms) {
  MixedElement<Rational> e(Rational(0));
  for (int i = 0; i < terms; ++i) {
    const int n = src.index(0, support - 1);
    const int j = src.index(0, support - 1 - n);
    const int k = src.index(0, support - 1 - n);
    e.add(j, n, k, src.next());
  }
  return e;
}

inline OrderedElement<Rational> mono(int j, int k) {
  return OrderedElement<Rational>::monomial(Ordering::kNormal, j, k, Rational(1));
}

inline Rational numeric_t(const RunConfig& cfg) { return cfg.t ? *cfg.t : make_rational(1, 3); }

inline void suite_qscalar(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  const Rational& q2 = ctx.q2();
  rec.run("qscalar.qpoch-split", "q-Pochhammer product rule", [&] {
    RationalSource src(11);
    for (int trial = 0; trial < 20; ++trial) {
      Rational a = src.next();
      Rational b = src.next();
      for (int m = 0; m <= 20; m += 4)
        for (int n = 0; n <= 20; n += 5)
          if (qpoch(a, b, m + n) != qpoch(a, b, m) * qpoch(Rational(a * ipow(b, m)), b, n))
            return mismatch("split", m, n);
    }
    return std::string();
  });
  rec.run("qscalar.qbinom-reciprocal", "q-binomial pair a(t) b(t) = 1", [&] {
    const Rational t0 = numeric_t(cfg);
    const TSeries a = qbinom_expand(ctx, Rational(1 / (t0 * q2)), cfg.nt).rescaled(t0 * q2);
    const TSeries b = qbinom_expand(ctx, Rational(t0 * q2), cfg.nt);
    const TSeries one(cfg.nt, Rational(1));
    return a * b == one ? std::string() : mismatch("a*b", a * b, one);
  });
  rec.run("qscalar.phi32-symmetry", "terminating 3phi2 symmetry", [&] {
    RationalSource src(12);
    for (int j = 0; j <= 8; ++j) {
      Rational a2 = src.next();
      Rational a3 = src.next();
      if (phi32_terminating(ctx, j, a2, a3) != phi32_terminating(ctx, j, a3, a2)) return mismatch("j", j, "asym");
    }
    return std::string();
  });
  rec.run("qscalar.box-eigenvalue-zeros", "Laplace-Beltrami eigenvalue", [&] {
    if (box_eigenvalue(ctx, Rational(1)) != 0) return std::string("l = 0 not zero");
    if (box_eigenvalue(ctx, Rational(1 / q2)) != 0) return std::string("l = -1 not zero");
    return std::string();
  });
}

inline void suite_roundtrips(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  rec.run("ordering.normal-roundtrip", "unique normal-ordered decomposition", [&] {
    RationalSource src(21);
    for (int i = 0; i < 100; ++i) {
      auto e = random_ordered(src, Ordering::kNormal, 5, 4);
      if (normal_order(ctx, to_matrix(ctx, e, 12), 5) != e) return mismatch("element", e, "roundtrip");
    }
    return std::string();
  });
  rec.run("ordering.antinormal-roundtrip", "anti-normal decomposition", [&] {
    RationalSource src(22);
    for (int i = 0; i < 100; ++i) {
      auto e = random_ordered(src, Ordering::kAntiNormal, 5, 4);
      if (anti_normal_order(ctx, to_matrix(ctx, e, 12), 5) != e) return mismatch("element", e, "roundtrip");
    }
    return std::string();
  });
  rec.run("ordering.hat-roundtrip", "unique zhat decomposition", [&] {
    RationalSource src(23);
    const auto space = formal_space(ctx, cfg.nt, 12);
    for (int i = 0; i < 100; ++i) {
      auto e = to_formal(random_ordered(src, Ordering::kNormal, 5, 4), cfg.nt);
      if (hat_normal_order(space, hat_to_matrix(space, e), 5) != e) return mismatch("element", e, "roundtrip");
    }
    return std::string();
  });
}

inline void suite_toeplitz(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  const Rational t = numeric_t(cfg);
  const WeightedSpace<Rational> space(ctx, t, 10);
  rec.run("toeplitz.trace-vs-integral", "Toeplitz matrix elements: trace vs integral form", [&] {
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; b <= 4; ++b)
        for (int n = 0; n <= 4; ++n) {
          MixedElement<Rational> f(Rational(0));
          f.add(a, n, b, Rational(1));
          const auto fm = to_matrix(ctx, f, f.support());
          const auto t1 = toeplitz(space, fm);
          const auto t2 = toeplitz_integral_form(space, fm);
          const auto t3 = toeplitz_inner_product_form(space, fm);
          if (!block_equal(t1, t2, 7) || !block_equal(t1, t3, 7)) return mismatch("symbol (a,n,b)", a * 100 + n * 10 + b, "");
        }
    return std::string();
  });
  rec.run("toeplitz.polynomial-coherence", "Toeplitz of z*^j z^k is zhat*^j zhat^k", [&] {
    const auto fs = formal_space(ctx, cfg.nt, 14);
    const auto [z, zs] = hat_generators(fs);
    const auto zp = matrix_powers(z, 4);
    const auto zsp = matrix_powers(zs, 4);
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k) {
        const auto sym = to_formal(OrderedElement<Rational>::monomial(Ordering::kAntiNormal, j, k, Rational(1)), cfg.nt);
        const auto prod = zsp[static_cast<std::size_t>(j)] * zp[static_cast<std::size_t>(k)];
        if (!block_equal(toeplitz_polynomial(fs, sym), prod, prod.reliable())) return mismatch("monomial", j, k);
      }
    return std::string();
  });
  rec.run("toeplitz.f0-identity", "projection identity for f0 (delta_j0)", [&] {
    for (int j = 0; j <= 20; ++j)
      if (!f0hat_identity_check(ctx, j, t)) return mismatch("j", j, f0hat_identity_sum(ctx, j, t));
    return std::string();
  });
  rec.run("toeplitz.duality", "symbol duality with tr_q", [&] {
    RationalSource src(31);
    for (int i = 0; i < 10; ++i) {
      const auto f = random_finite(src, 5, 3);
      const auto psi = random_finite(src, 5, 3);
      const auto [lhs, rhs] = duality_sides(space, to_matrix(ctx, f, 5), to_matrix(ctx, psi, 5));
      if (lhs != rhs) return mismatch("duality", lhs, rhs);
    }
    return std::string();
  });
  rec.run("toeplitz.limit-norm", "t -> 0 limit of the weighted norm", [&] {
    RationalSource src(32);
    const int order = 2;
    const auto fs = formal_space(ctx, order, 8);
    for (int i = 0; i < 10; ++i) {
      OrderedElement<Rational> psi(Ordering::kNormal, Rational(0));
      for (int d = 0; d <= 5; ++d) psi.add(d, 0, src.next());
      const auto pm = to_matrix(ctx, to_formal(psi, order), 8);
      const TSeries norm = inner_product(ctx, pm, pm, fs.t) * Rational(1 - ctx.q2()) / (fs.one() - fs.t);
      const auto pf = to_matrix(ctx, psi, 8) * rep_f(0, 8);
      const Rational limit = integrate_invariant(ctx, adjoint(ctx, pf) * pf);
      if (norm[0] != limit) return mismatch("limit", norm[0], limit);
    }
    return std::string();
  });
}

inline void suite_berezin_f0(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  rec.run("berezin.f0-expansion", "Berezin transform of f0", [&] {
    return expansion_check_f0(ctx, cfg.nt, cfg.nf) ? std::string() : std::string("expansion differs");
  });
}

inline void suite_p_hypergeometric(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  rec.run("berezin.p-hypergeometric", "p_j at box eigenvalues equals terminating 3phi2", [&] {
    for (int j = 0; j <= 12; ++j) {
      const Poly p = p_poly(ctx, j);
      for (int l = 0; l <= 12; ++l) {
        const Rational lhs = p.evaluate(box_eigenvalue(ctx, ctx.q2pow(l)));
        const Rational rhs = phi32_terminating(ctx, j, ctx.q2pow(-l), ctx.q2pow(l + 1));
        if (lhs != rhs) return mismatch("(j,l)", j * 100 + l, "");
      }
    }
    return std::string();
  });
}

inline ConventionSet resolve_convention(const RunConfig& cfg, const QContext& ctx) {
  if (cfg.convention == "calibrate") return calibrate_convention(ctx, std::min(cfg.nt, 2));
  return ConventionSet::parse(cfg.convention);
}

inline void suite_star(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  std::optional<ConventionSet> conv;
  rec.run("star.calibration", "q-derivative convention calibration", [&] {
    const CalibrationResult r = calibration_table(ctx, std::min(cfg.nt, 2));
    if (r.matching.size() != 1) return "expected exactly one convention\n" + r.table();
    conv = r.matching.front();
    if (cfg.convention != "calibrate" && ConventionSet::parse(cfg.convention) != *conv)
      return "configured convention " + cfg.convention + " differs from calibrated " + conv->id();
    return std::string();
  });
  if (!conv) {
    rec.skip("star.routes", "asymptotic expansion of the star product", "no calibrated convention");
    return;
  }
  rec.run("star.routes", "asymptotic expansion of the star product", [&] {
    std::vector<std::pair<OrderedElement<Rational>, OrderedElement<Rational>>> pairs;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) pairs.emplace_back(mono(0, a), mono(b, 0));
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b)
        for (int c = 0; c <= 2; ++c)
          for (int d = 0; d <= 2; ++d) pairs.emplace_back(mono(a, b), mono(c, d));
    const int order = std::min(cfg.nt, 4);
    for (const auto& [f1, f2] : pairs) {
      const RouteReport r = compare_routes(ctx, f1, f2, order, *conv);
      if (!r.equal()) {
        const auto& m = r.mismatches.front();
        std::ostringstream os;
        os << f1 << " * " << f2 << ": t^" << m.order << " z^" << m.j << " z*^" << m.k << ": "
           << m.operator_route << " vs " << m.asymptotic_route;
        return os.str();
      }
    }
    return std::string();
  });
  rec.run("star.associativity", "associativity of the operator-route star product", [&] {
    const int order = std::min(cfg.nt, 3);
    std::vector<std::pair<int, int>> monos;
    for (int d = 0; d <= 2; ++d)
      for (int a = 0; a <= d; ++a) monos.emplace_back(a, d - a);
    for (const auto& m1 : monos)
      for (const auto& m2 : monos)
        for (const auto& m3 : monos) {
          const auto f1 = to_formal(mono(m1.first, m1.second), order);
          const auto f2 = to_formal(mono(m2.first, m2.second), order);
          const auto f3 = to_formal(mono(m3.first, m3.second), order);
          const auto lhs = star_product(ctx, star_product(ctx, f1, f2), f3);
          const auto rhs = star_product(ctx, f1, star_product(ctx, f2, f3));
          if (lhs != rhs) return mismatch("triple", f1, f3);
        }
    return std::string();
  });
}

inline void suite_c_series(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  rec.run("c-series.solve-vs-closed", "c_k: triangular system vs closed form", [&] {
    c_series(ctx, 12, std::min(cfg.nt, 8));
    return std::string();
  });
  rec.run("c-series.t0-layer", "c_k at t^0: q^2 u + 1 - q^2", [&] {
    const auto c = c_series_solve(ctx, 12, 0);
    for (int k = 0; k <= 12; ++k) {
      const Rational expect = k == 0 ? Rational(1 - ctx.q2()) : k == 1 ? ctx.q2() : Rational(0);
      if (c[static_cast<std::size_t>(k)][0] != expect) return mismatch("k", k, c[static_cast<std::size_t>(k)]);
    }
    return std::string();
  });
}

inline void suite_kernels(const RunConfig& cfg, Recorder& rec) {
  const QContext ctx(cfg.q);
  for (int two_alpha = 1; two_alpha <= 3; ++two_alpha) {
    const HalfIntWeight w(ctx, two_alpha);
    const std::string tag = "[2alpha=" + std::to_string(two_alpha) + "]";
    rec.run("kernels.projection" + tag, "reproducing kernel projection", [&] {
      RationalSource src(40 + static_cast<unsigned>(two_alpha));
      for (int i = 0; i < 20; ++i) project_kernel(w, to_matrix(ctx, random_finite(src, 5, 3), 5));
      return std::string();
    });
    rec.run("kernels.pfp" + tag, "kernel of P f P from coherent vectors", [&] {
      RationalSource src(50 + static_cast<unsigned>(two_alpha));
      for (int i = 0; i < 10; ++i) {
        const auto f = to_matrix(ctx, random_finite(src, 4, 3), 4);
        const PfpKernel k = pfp_kernel(w, f, std::max(cfg.s, 4));
        const auto op = kernel_operator(w, k.moments);
        if (!block_equal(op, toeplitz(w.space(op.dim()), resize_finite(f, op.dim())), op.dim()))
          return std::string("kernel matrix elements differ from the Toeplitz operator");
      }
      return std::string();
    });
  }
}

using SuiteFn = void (*)(const RunConfig&, Recorder&);

inline const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r = {
      {"identities-qscalar", suite_qscalar}, {"ordering-roundtrips", suite_roundtrips},
      {"toeplitz-consistency", suite_toeplitz}, {"berezin-f0", suite_berezin_f0},
      {"lemma33", suite_p_hypergeometric}, {"star-routes", suite_star},
      {"c-series", suite_c_series}, {"kernels-appendix", suite_kernels},
  };
  return r;
}

inline std::vector<Check> run_verify(const RunConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& s : cfg.suites) {
    if (s == "all") {
      for (const auto& [name, fn] : registry()) names.push_back(name);
    } else if (registry().count(s) != 0) {
      names.push_back(s);
    } else {
      throw ConfigInvalid("unknown suite '" + s + "'");
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Recorder rec(cfg.timing);
  for (const auto& name : names) registry().at(name)(cfg, rec);
  std::vector<Check> checks = rec.take();
  std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  return checks;
}

}  // namespace qdisc::cli
