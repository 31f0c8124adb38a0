// Command-line front end: `verify` runs the identity suites, `compute`
// evaluates star products, Berezin transforms and coefficient tables.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "suites.hpp"

namespace {

using nlohmann::ordered_json;
using qdisc::Rational;
using qdisc::TSeries;
namespace cli = qdisc::cli;

constexpr const char* kVersion = "1.0.0";

ordered_json to_json(const Rational& r) { return qdisc::to_string(r); }

ordered_json to_json(const TSeries& s) {
  ordered_json a = ordered_json::array();
  for (const auto& c : s.coeffs()) a.push_back(qdisc::to_string(c));
  return a;
}

Rational rational_field(const nlohmann::json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw qdisc::ConfigInvalid(what + " must be a rational string");
  return qdisc::parse_rational(v.get<std::string>());
}

struct Inputs {
  cli::RunConfig run;
  nlohmann::json raw;  // expressions and table selection
};

void apply_file(const std::string& path, Inputs& in) {
  std::ifstream f(path);
  if (!f) throw qdisc::ConfigInvalid("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw qdisc::ConfigInvalid(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw qdisc::ConfigInvalid("config must be a JSON object");
  auto& r = in.run;
  if (j.contains("q")) r.q = rational_field(j["q"], "q");
  if (j.contains("t")) {
    if (j["t"] == "formal") {
      r.t.reset();
    } else {
      r.t = rational_field(j["t"], "t");
    }
  }
  auto int_field = [&](const char* key, int& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw qdisc::ConfigInvalid(std::string(key) + " must be an integer");
    dst = j[key].get<int>();
  };
  int_field("nt", r.nt);
  int_field("m", r.m);
  int_field("nf", r.nf);
  int_field("s", r.s);
  if (j.contains("convention")) r.convention = j["convention"].get<std::string>();
  if (j.contains("suites")) r.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("output")) r.out = j["output"].get<std::string>();
  in.raw = j;
}

void validate(const cli::RunConfig& r) {
  if (r.q <= 0 || r.q >= 1) throw qdisc::ConfigInvalid("q must satisfy 0 < q < 1");
  if (r.t && (*r.t <= 0 || *r.t >= 1)) throw qdisc::ConfigInvalid("t must satisfy 0 < t < 1");
  if (r.nt < 1 || r.m < 1 || r.nf < 1 || r.s < 1) throw qdisc::ConfigInvalid("orders must be >= 1");
  if (r.convention != "calibrate") qdisc::ConventionSet::parse(r.convention);
}

ordered_json config_echo(const cli::RunConfig& r) {
  ordered_json c;
  c["q"] = qdisc::to_string(r.q);
  c["t"] = r.t ? qdisc::to_string(*r.t) : "formal";
  c["nt"] = r.nt;
  c["m"] = r.m;
  c["nf"] = r.nf;
  c["s"] = r.s;
  c["convention"] = r.convention;
  c["suites"] = r.suites;
  return c;
}

ordered_json report(const cli::RunConfig& r, const std::vector<cli::Check>& checks) {
  ordered_json rep;
  rep["version"] = kVersion;
  rep["config"] = config_echo(r);
  rep["checks"] = ordered_json::array();
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& c : checks) {
    ordered_json e;
    e["id"] = c.id;
    e["paper_ref"] = c.paper_ref;
    e["status"] = c.status;
    e["detail"] = c.detail;
    if (c.millis) e["timing_ms"] = *c.millis;
    rep["checks"].push_back(e);
    (c.status == "pass" ? passed : c.status == "fail" ? failed : skipped)++;
  }
  rep["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  return rep;
}

qdisc::OrderedElement<Rational> parse_ordered(const nlohmann::json& j) {
  const std::string ord = j.value("ordering", "normal");
  qdisc::Ordering o;
  if (ord == "normal") {
    o = qdisc::Ordering::kNormal;
  } else if (ord == "anti_normal") {
    o = qdisc::Ordering::kAntiNormal;
  } else {
    throw qdisc::ConfigInvalid("ordering must be normal or anti_normal");
  }
  qdisc::OrderedElement<Rational> e(o, Rational(0));
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 3) throw qdisc::ConfigInvalid("polynomial term must be [j, k, c]");
    e.add(t[0].get<int>(), t[1].get<int>(), rational_field(t[2], "coefficient"));
  }
  return e;
}

qdisc::MixedElement<Rational> parse_finite(const nlohmann::json& j) {
  qdisc::MixedElement<Rational> e(Rational(0));
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 4) throw qdisc::ConfigInvalid("finite term must be [j, n, k, c]");
    e.add(t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), rational_field(t[3], "coefficient"));
  }
  return e;
}

const nlohmann::json& require(const nlohmann::json& raw, const char* key) {
  if (!raw.contains(key)) throw qdisc::ConfigInvalid(std::string("config lacks '") + key + "'");
  return raw[key];
}

template <class E>
ordered_json ordered_payload(const E& e) {
  ordered_json a = ordered_json::array();
  for (const auto& [key, c] : e.terms()) a.push_back({{"j", key.first}, {"k", key.second}, {"c", to_json(c)}});
  return a;
}

template <class R>
ordered_json mixed_payload(const qdisc::MixedElement<R>& e) {
  ordered_json a = ordered_json::array();
  for (const auto& [key, c] : e.terms)
    a.push_back({{"j", std::get<0>(key)}, {"n", std::get<1>(key)}, {"k", std::get<2>(key)}, {"c", to_json(c)}});
  return a;
}

ordered_json compute(const std::string& what, const Inputs& in, std::vector<cli::Check>& checks) {
  const cli::RunConfig& r = in.run;
  const qdisc::QContext ctx(r.q);
  cli::Recorder rec(r.timing);
  ordered_json payload;
  if (what == "star") {
    const auto f1 = parse_ordered(require(in.raw, "f1"));
    const auto f2 = parse_ordered(require(in.raw, "f2"));
    const auto p = qdisc::star_product(ctx, qdisc::to_formal(f1, r.nt), qdisc::to_formal(f2, r.nt));
    payload["ordering"] = "normal";
    payload["terms"] = ordered_payload(p);
    rec.run("compute.star-routes", "operator route vs asymptotic expansion", [&] {
      const auto conv = cli::resolve_convention(r, ctx);
      const auto rep = qdisc::compare_routes(ctx, f1, f2, r.nt, conv);
      return rep.equal() ? std::string() : std::to_string(rep.mismatches.size()) + " coefficient mismatches";
    });
  } else if (what == "berezin") {
    const auto& fj = require(in.raw, "f");
    if (fj.contains("ordering")) {
      if (r.t) throw qdisc::ConfigInvalid("Berezin transform of a polynomial needs formal t");
      const auto f = parse_ordered(fj);
      const int deg = f.max_degree() + r.nt + 1;
      const auto space = qdisc::formal_space(ctx, r.nt, static_cast<std::size_t>(std::max(r.m, 2 * deg + 1)));
      payload["ordering"] = "normal";
      payload["terms"] = ordered_payload(qdisc::berezin_polynomial(space, qdisc::to_formal(f, r.nt)));
    } else {
      const auto f = parse_finite(fj);
      const std::size_t dim = std::max<std::size_t>(static_cast<std::size_t>(r.m), 2 * f.support() + 2);
      if (r.t) {
        const qdisc::WeightedSpace<Rational> space(ctx, *r.t, dim);
        payload["terms"] = mixed_payload(qdisc::berezin(space, qdisc::to_matrix(ctx, f, f.support()), r.nf));
      } else {
        const auto space = qdisc::formal_space(ctx, r.nt, dim);
        const auto fm = qdisc::lift_matrix(qdisc::to_matrix(ctx, f, f.support()), space.t);
        payload["terms"] = mixed_payload(qdisc::berezin(space, fm, r.nf));
      }
    }
  } else if (what == "table") {
    const auto& tj = require(in.raw, "table");
    const std::string name = tj.at("name").get<std::string>();
    const int from = tj.value("from", 0);
    const int to = tj.value("to", 8);
    if (from < 0 || to < from) throw qdisc::ConfigInvalid("table range must satisfy 0 <= from <= to");
    payload["name"] = name;
    ordered_json rows = ordered_json::array();
    if (name == "c-series") {
      const auto c = qdisc::c_series(ctx, to, r.nt);
      for (int k = from; k <= to; ++k) rows.push_back({{"k", k}, {"c", to_json(c[static_cast<std::size_t>(k)])}});
    } else if (name == "p-poly") {
      for (int j = from; j <= to; ++j) {
        const qdisc::Poly p = qdisc::p_poly(ctx, j);
        ordered_json cs = ordered_json::array();
        for (int i = 0; i <= p.degree(); ++i) cs.push_back(to_json(p.coeff(i)));
        rows.push_back({{"j", j}, {"coeffs", cs}});
      }
    } else if (name == "gram") {
      const auto dim = static_cast<std::size_t>(to + 2);
      for (int m = from; m <= to; ++m) {
        if (r.t) {
          rows.push_back({{"m", m}, {"value", to_json(qdisc::gram(qdisc::WeightedSpace<Rational>(ctx, *r.t, dim), m))}});
        } else {
          rows.push_back({{"m", m}, {"value", to_json(qdisc::gram(qdisc::formal_space(ctx, r.nt, dim), m))}});
        }
      }
    } else {
      throw qdisc::ConfigInvalid("unknown table '" + name + "'");
    }
    payload["rows"] = rows;
  } else {
    throw qdisc::ConfigInvalid("unknown computation '" + what + "'");
  }
  checks = rec.take();
  return payload;
}

int emit(const ordered_json& rep, const std::string& out) {
  const std::string text = rep.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  return rep["summary"]["failed"].get<int>() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Berezin-Toeplitz quantization on the quantum disc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string q, t, convention, out;
  std::optional<int> nt, m, nf, s;
  std::vector<std::string> suites;
  bool timing = false;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--q", q, "deformation parameter, e.g. 3/5");
    sub->add_option("--t", t, "weight parameter or 'formal'");
    sub->add_option("--nt", nt, "t-order");
    sub->add_option("--m", m, "matrix truncation");
    sub->add_option("--nf", nf, "radial truncation");
    sub->add_option("--s", s, "kernel truncation");
    sub->add_option("--convention", convention, "convention id or 'calibrate'");
    sub->add_option("--out", out, "report path (default stdout)");
    sub->add_flag("--timing", timing, "add per-check timing to the report");
  };

  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_overrides(verify);
  verify->add_option("--suite", suites, "suite name (repeatable)");

  std::string what;
  auto* comp = app.add_subcommand("compute", "compute star | berezin | table");
  comp->add_option("what", what, "star, berezin or table")->required();
  add_overrides(comp);

  CLI11_PARSE(app, argc, argv);

  try {
    Inputs in;
    if (!config_path.empty()) apply_file(config_path, in);
    auto& r = in.run;
    if (!q.empty()) r.q = qdisc::parse_rational(q);
    if (!t.empty()) {
      if (t == "formal") {
        r.t.reset();
      } else {
        r.t = qdisc::parse_rational(t);
      }
    }
    if (nt) r.nt = *nt;
    if (m) r.m = *m;
    if (nf) r.nf = *nf;
    if (s) r.s = *s;
    if (!convention.empty()) r.convention = convention;
    if (!suites.empty()) r.suites = suites;
    if (!out.empty()) r.out = out;
    r.timing = timing;
    validate(r);

    if (verify->parsed()) return emit(report(r, cli::run_verify(r)), r.out);

    std::vector<cli::Check> checks;
    const ordered_json payload = compute(what, in, checks);
    ordered_json rep = report(r, checks);
    rep["config"]["what"] = what;
    rep["payload"] = payload;
    return emit(rep, r.out);
  } catch (const qdisc::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return 2;
  }
}
