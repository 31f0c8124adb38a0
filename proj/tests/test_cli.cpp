#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "suites.hpp"

namespace {

using nlohmann::json;

struct CliRun {
  int status;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(QDISC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int rc = pclose(pipe);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string write_config(const std::string& name, const json& j) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << j.dump();
  return path.string();
}

TEST(Registry, RunsSelectedSuitesSortedById) {
  qdisc::cli::RunConfig cfg;
  cfg.suites = {"lemma33", "c-series"};
  const auto checks = qdisc::cli::run_verify(cfg);
  ASSERT_EQ(checks.size(), 3u);
  for (std::size_t i = 1; i < checks.size(); ++i) EXPECT_LT(checks[i - 1].id, checks[i].id);
  for (const auto& c : checks) EXPECT_EQ(c.status, "pass") << c.id << ": " << c.detail;
}

TEST(Registry, UnknownSuiteIsConfigError) {
  qdisc::cli::RunConfig cfg;
  cfg.suites = {"nope"};
  EXPECT_THROW(qdisc::cli::run_verify(cfg), qdisc::ConfigInvalid);
}

TEST(Registry, ConfiguredConventionMustMatchCalibration) {
  qdisc::cli::RunConfig cfg;
  cfg.nt = 2;
  cfg.suites = {"star-routes"};
  cfg.convention = "z-q2/mirror/after";
  const auto checks = qdisc::cli::run_verify(cfg);
  ASSERT_FALSE(checks.empty());
  EXPECT_EQ(checks.front().id, "star.associativity");
  bool failed = false;
  for (const auto& c : checks) failed |= c.status == "fail";
  EXPECT_TRUE(failed);
}

TEST(Verify, HypergeometricSuitePassesWithReportSchema) {
  const CliRun r = run_cli("verify --suite lemma33 --q 3/5");
  ASSERT_EQ(r.status, 0);
  const json rep = json::parse(r.out);
  for (const char* key : {"version", "config", "checks", "summary"}) EXPECT_TRUE(rep.contains(key)) << key;
  EXPECT_EQ(rep["config"]["q"], "3/5");
  EXPECT_EQ(rep["summary"]["failed"], 0);
  for (const auto& c : rep["checks"]) {
    for (const char* key : {"id", "paper_ref", "status", "detail"}) EXPECT_TRUE(c.contains(key)) << key;
    EXPECT_FALSE(c.contains("timing_ms"));
  }
}

TEST(Verify, ConfigFileAndFlagOverrides) {
  const auto path = write_config("qdisc_cli_berezin.json", {{"q", "1/2"}, {"t", "formal"}, {"nt", 10}, {"nf", 10}, {"suites", {"berezin-f0"}}});
  const CliRun r = run_cli("verify --config " + path + " --q 3/5");
  ASSERT_EQ(r.status, 0);
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["config"]["q"], "3/5");
  EXPECT_EQ(rep["config"]["t"], "formal");
  EXPECT_EQ(rep["config"]["nt"], 10);
  EXPECT_EQ(rep["summary"]["passed"], 1);
}

TEST(Verify, ReportIsDeterministic) {
  const CliRun a = run_cli("verify --suite c-series --suite identities-qscalar");
  const CliRun b = run_cli("verify --suite identities-qscalar --suite c-series");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out.substr(a.out.find("\"checks\"")), b.out.substr(b.out.find("\"checks\"")));
  EXPECT_EQ(a.out, run_cli("verify --suite c-series --suite identities-qscalar").out);
}

TEST(Verify, InvalidInputsExitWithConfigError) {
  EXPECT_EQ(run_cli("verify --suite nope").status, 2);
  EXPECT_EQ(run_cli("verify --q 3/2").status, 2);
  EXPECT_EQ(run_cli("verify --t 1").status, 2);
  EXPECT_EQ(run_cli("verify --convention bogus").status, 2);
  EXPECT_EQ(run_cli("verify --config /nonexistent.json").status, 2);
}

TEST(Verify, FailingCheckGivesNonzeroExit) {
  const CliRun r = run_cli("verify --suite star-routes --nt 1 --convention z-q2/swap/after");
  EXPECT_EQ(r.status, 1);
  EXPECT_GT(json::parse(r.out)["summary"]["failed"].get<int>(), 0);
}

TEST(Compute, StarProductPayload) {
  const json cfg = {{"q", "3/5"}, {"nt", 2}, {"f1", {{"ordering", "normal"}, {"terms", {{0, 1, "1"}}}}}, {"f2", {{"terms", {{1, 0, "1"}}}}}};
  const CliRun r = run_cli("compute star --config " + write_config("qdisc_cli_star.json", cfg));
  ASSERT_EQ(r.status, 0);
  const json rep = json::parse(r.out);
  const auto& terms = rep["payload"]["terms"];
  ASSERT_GE(terms.size(), 2u);
  EXPECT_EQ(terms[0]["j"], 0);
  EXPECT_EQ(terms[0]["c"][0], "16/25");
  EXPECT_EQ(terms[1]["c"][0], "9/25");
  EXPECT_EQ(rep["checks"][0]["status"], "pass");
}

TEST(Compute, BerezinOfF0AtNumericT) {
  const json cfg = {{"q", "1/2"}, {"t", "1/3"}, {"nf", 3}, {"f", {{"terms", {{0, 0, 0, "1"}}}}}};
  const CliRun r = run_cli("compute berezin --config " + write_config("qdisc_cli_berezin_f0.json", cfg));
  ASSERT_EQ(r.status, 0);
  const json rep = json::parse(r.out);
  // (1 - t) (t q^2)^n on f_n
  EXPECT_EQ(rep["payload"]["terms"][0]["c"], "2/3");
  EXPECT_EQ(rep["payload"]["terms"][1]["n"], 1);
  EXPECT_EQ(rep["payload"]["terms"][1]["c"], "1/18");
}

TEST(Compute, Tables) {
  const json cfg = {{"q", "1/2"}, {"t", "1/4"}, {"nt", 1}, {"table", {{"name", "gram"}, {"from", 0}, {"to", 1}}}};
  const CliRun g = run_cli("compute table --config " + write_config("qdisc_cli_gram.json", cfg));
  ASSERT_EQ(g.status, 0);
  EXPECT_EQ(json::parse(g.out)["payload"]["rows"][1]["value"], "4/5");

  json pc = cfg;
  pc["table"] = {{"name", "p-poly"}, {"from", 1}, {"to", 1}};
  const CliRun p = run_cli("compute table --config " + write_config("qdisc_cli_ppoly.json", pc));
  EXPECT_EQ(json::parse(p.out)["payload"]["rows"][0]["coeffs"], json({"1/1", "3/4"}));

  json cc = cfg;
  cc["table"] = {{"name", "c-series"}, {"from", 0}, {"to", 2}};
  const CliRun c = run_cli("compute table --config " + write_config("qdisc_cli_cseries.json", cc));
  EXPECT_EQ(json::parse(c.out)["payload"]["rows"][1]["c"][0], "1/4");

  json bad = cfg;
  bad["table"] = {{"name", "nope"}};
  EXPECT_EQ(run_cli("compute table --config " + write_config("qdisc_cli_bad.json", bad)).status, 2);
}

}  // namespace
