#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "saddlecheck/pipeline.hpp"

using namespace saddle::pipeline;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("saddlecheck_pl_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

RunConfig small(int m, std::vector<std::string> stages, const std::string& name) {
  RunConfig c;
  c.m = m;
  c.R = 8;
  c.h = 0.2;
  c.stages = std::move(stages);
  c.out_dir = temp_dir(name);
  c.cache_dir = c.out_dir / "cache";
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

}  // namespace

TEST(Config, ParsesSectionsAndKeepsDefaults) {
  const RunConfig c = parse_config(
      "[run]\nn = 10\nR = 16\nh = 0.1\nstages = solve, spectrum\n"
      "[solver]\nnewton_tol = 1e-9\n[suite]\nchecks = 1,2\n[rigor]\nclaims = C_s_neg_n10\nmargin = 1e-12\n"
      "[output]\nout = results\ncache = refresh\n");
  EXPECT_EQ(c.m, 5);
  EXPECT_EQ(c.n(), 10);
  EXPECT_DOUBLE_EQ(c.R, 16.0);
  EXPECT_DOUBLE_EQ(c.h, 0.1);
  EXPECT_EQ(c.stages, (std::vector<std::string>{"solve", "spectrum"}));
  EXPECT_DOUBLE_EQ(c.solver.newton_tol, 1e-9);
  EXPECT_EQ(c.solver.max_newton_iters, RunConfig{}.solver.max_newton_iters);
  EXPECT_EQ(c.suite_checks, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(c.rigor_claims, (std::vector<std::string>{"C_s_neg_n10"}));
  EXPECT_DOUBLE_EQ(c.rigor_margin, 1e-12);
  EXPECT_EQ(c.out_dir, "results");
  EXPECT_EQ(c.cache, CachePolicy::refresh);
}

TEST(Config, TextRoundTrip) {
  RunConfig c;
  c.m = 6;
  c.R = 20;
  c.h = 0.05;
  c.suite_checks = {"3a", "27b"};
  c.include_phi0 = false;
  c.eig.seed = 7;
  c.cache = CachePolicy::off;
  const RunConfig back = parse_config(config_text(c));
  EXPECT_EQ(config_text(back), config_text(c));
  EXPECT_FALSE(back.include_phi0);
  EXPECT_EQ(back.eig.seed, 7u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("[run]\nmm = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("[mystery]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\nm = four\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\nm = 4\nn = 8\n"), ConfigError);
  EXPECT_THROW(parse_config("[output]\ncache = sometimes\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, NormalizeOrdersStagesAndAddsPrerequisites) {
  RunConfig c;
  c.stages = {"certificate", "rigor"};
  c.normalize();
  EXPECT_EQ(c.stages, (std::vector<std::string>{"solve", "supersolution", "rigor", "certificate"}));
}

TEST(Config, ValidationInvariants) {
  auto bad = [](auto edit) {
    RunConfig c;
    edit(c);
    EXPECT_THROW(c.normalize(), ConfigError);
  };
  bad([](RunConfig& c) { c.stages = {}; });
  bad([](RunConfig& c) { c.stages = {"solve", "fly"}; });
  bad([](RunConfig& c) { c.m = 7; });
  bad([](RunConfig& c) { c.m = 0; });
  bad([](RunConfig& c) {
    c.m = 2;
    c.stages = {"supersolution"};
  });
  bad([](RunConfig& c) { c.R = 6; });
  bad([](RunConfig& c) { c.h = 0.3; });
  bad([](RunConfig& c) { c.h = 0.07; });
  bad([](RunConfig& c) { c.suite_checks = {"99"}; });
  RunConfig solve_only;
  solve_only.m = 1;
  solve_only.stages = {"solve", "spectrum"};
  EXPECT_NO_THROW(solve_only.normalize());
}

TEST(Config, CacheDirectoryResolution) {
  RunConfig c;
  c.out_dir = "out";
  ::unsetenv("SADDLECHECK_CACHE_DIR");
  EXPECT_EQ(c.resolved_cache_dir(), std::filesystem::path("out") / "cache");
  ::setenv("SADDLECHECK_CACHE_DIR", "/tmp/env_cache", 1);
  EXPECT_EQ(c.resolved_cache_dir(), "/tmp/env_cache");
  c.cache_dir = "explicit";
  EXPECT_EQ(c.resolved_cache_dir(), "explicit");
  ::unsetenv("SADDLECHECK_CACHE_DIR");
}

TEST(Pipeline, SpectrumRecordsInstabilityForMEqualsTwo) {
  const RunReport r = run(small(2, {"spectrum"}, "spec"));
  ASSERT_TRUE(r.spectrum.has_value());
  EXPECT_LT(r.spectrum->lambda_min, 0.0);
  EXPECT_TRUE(r.spectrum->pass);
  EXPECT_TRUE(r.passed());
  ASSERT_TRUE(r.solver.has_value());
  EXPECT_EQ(r.config.stages, (std::vector<std::string>{"solve", "spectrum"}));
  const auto j = nlohmann::json::parse(run_report_json(r));
  EXPECT_EQ(j["schema_version"], kRunReportSchemaVersion);
  EXPECT_LT(j["spectrum"]["lambda_min"].get<double>(), 0.0);
  std::filesystem::remove_all(r.config.out_dir);
}

TEST(Pipeline, RerunIsByteIdenticalApartFromRuntime) {
  const RunConfig c = small(4, {"suite", "spectrum"}, "rerun");
  const RunReport first = run(c);
  const RunReport second = run(c);
  EXPECT_FALSE(first.solver->cache_reused);
  EXPECT_TRUE(second.solver->cache_reused);
  EXPECT_EQ(run_report_json(first, false), run_report_json(second, false));
  EXPECT_NE(run_report_json(first, true).find("\"runtime\""), std::string::npos);
  EXPECT_EQ(run_report_json(first, false).find("\"runtime\""), std::string::npos);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Pipeline, CorruptCacheForcesResolve) {
  const RunConfig c = small(1, {"solve"}, "corrupt");
  const RunReport first = run(c);
  std::filesystem::path file;
  for (const auto& e : std::filesystem::directory_iterator(c.cache_dir)) file = e.path();
  ASSERT_FALSE(file.empty());
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  const RunReport second = run(c);
  EXPECT_FALSE(second.solver->cache_reused);
  EXPECT_EQ(second.solver->solution_hash, first.solver->solution_hash);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Pipeline, SuiteSelectionAndFailureReporting) {
  RunConfig c = small(4, {"suite"}, "select");
  c.suite_checks = {"1", "2"};
  const RunReport r = run(c);
  ASSERT_EQ(r.suite.size(), 2u);
  EXPECT_EQ(r.suite[0].id, "1");
  EXPECT_EQ(r.suite[1].id, "2");

  RunReport broken = r;
  broken.suite[0].pass = false;
  EXPECT_FALSE(broken.passed());
  EXPECT_EQ(broken.failures().size(), 1u);
  EXPECT_NE(summary_line(broken).find("status=FAIL"), std::string::npos);
  RunReport informational = broken;
  informational.suite[0].informational = true;
  EXPECT_TRUE(informational.passed());
  std::filesystem::remove_all(c.out_dir);
}

TEST(Pipeline, CertificateIssuedForN8) {
  RunConfig c;
  c.m = 4;
  c.R = 12;
  c.h = 0.1;
  c.stages = {"certificate"};
  c.out_dir = temp_dir("cert");
  c.cache = CachePolicy::off;
  const RunReport r = run(c);
  ASSERT_TRUE(r.supersolution.has_value());
  EXPECT_TRUE(r.supersolution->pass);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(r.certificate->issued) << r.certificate->reason;
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(std::filesystem::exists(c.out_dir / "cache"));
  const std::string line = summary_line(r);
  EXPECT_EQ(line.rfind("SADDLECHECK status=PASS", 0), 0u) << line;
  EXPECT_EQ(line.find('\n'), std::string::npos);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Pipeline, RigorStageRunsSelectedClaims) {
  RunConfig c = small(4, {"rigor"}, "rigor");
  c.rigor_claims = {"C_ss_neg_n8", "C_st_neg_n8"};
  const RunReport r = run(c);
  EXPECT_FALSE(r.solver.has_value());
  ASSERT_EQ(r.proofs.size(), 2u);
  for (const auto& p : r.proofs) {
    EXPECT_EQ(p.status, saddle::rigor::ProofStatus::proven) << p.claim_id;
    EXPECT_TRUE(p.frontier.empty());
  }
  const auto j = nlohmann::json::parse(run_report_json(r));
  EXPECT_EQ(j["proofs"].size(), 2u);
  EXPECT_EQ(j["proofs"][0]["status"], "proven");

  c.rigor_claims = {"no_such_claim"};
  EXPECT_THROW(run(c), ConfigError);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Pipeline, DefaultClaimIds) {
  EXPECT_EQ(default_claim_ids(8),
            (std::vector<std::string>{"defect_m4", "C_s_neg_n8", "C_ss_neg_n8", "C_st_neg_n8"}));
  EXPECT_EQ(default_claim_ids(12).front(), "defect_m6");
}

TEST(Export, FieldsCsvRoundTripIsBitwise) {
  const RunReport r = run(small(4, {"solve"}, "csv"));
  const auto dir = r.config.out_dir / "export";
  const auto files = export_report(r, "fields", dir);
  ASSERT_EQ(files.size(), 1u);
  const ImportedFields back = read_fields_csv(slurp(files[0]));
  const auto& sol = *r.solution;
  EXPECT_EQ(back.N, sol.grid.N);
  EXPECT_EQ(back.h, sol.grid.h);
  ASSERT_EQ(back.names.size(), 8u);
  EXPECT_EQ(back.names[0], "u");
  EXPECT_TRUE((back.fields[0].array() == sol.u.array()).all());
  EXPECT_TRUE((back.fields[5].array() == sol.u_tt.array()).all());
  std::filesystem::remove_all(r.config.out_dir);
}

TEST(Export, SignMapsAndJson) {
  const RunReport r = run(small(4, {"solve"}, "maps"));
  const auto dir = r.config.out_dir / "export";
  const auto files = export_report(r, "signmaps", dir);
  int svgs = 0;
  for (const auto& f : files) svgs += f.extension() == ".svg";
  EXPECT_EQ(svgs, 6);
  const auto json = export_report(r, "json", dir);
  ASSERT_EQ(json.size(), 1u);
  EXPECT_NO_THROW(nlohmann::json::parse(slurp(json[0])));
  EXPECT_THROW(export_report(r, "movies", dir), ConfigError);
  std::filesystem::remove_all(r.config.out_dir);
}

TEST(Export, MissingStageIsAnError) {
  RunConfig c = small(4, {"rigor"}, "missing");
  c.rigor_claims = {"C_st_neg_n8"};
  const RunReport r = run(c);
  const auto dir = c.out_dir / "export";
  EXPECT_THROW(export_report(r, "fields", dir), StageError);
  EXPECT_THROW(export_report(r, "signmaps", dir), StageError);
  EXPECT_FALSE(std::filesystem::exists(dir / "fields.csv"));
  std::filesystem::remove_all(c.out_dir);
}

TEST(Export, SignMapsNeedCandidateDimension) {
  const RunReport r = run(small(2, {"solve"}, "maps2"));
  EXPECT_THROW(export_report(r, "signmaps", r.config.out_dir / "x"), StageError);
  std::filesystem::remove_all(r.config.out_dir);
}
