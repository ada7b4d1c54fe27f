#include "saddlecheck/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "saddlecheck/catalog.hpp"
#include "saddlecheck/sign_map.hpp"
#include "saddlecheck/solution_cache.hpp"

namespace saddle::pipeline {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

rigor::ClaimSpec claim_by_id(const std::string& id) {
  if (id.rfind("defect_m", 0) == 0) {
    const std::string tail = id.substr(8);
    if (tail.size() == 1 && tail[0] >= '1' && tail[0] <= '6') return rigor::defect_claim(tail[0] - '0');
  }
  for (const std::string coeff : {"C_s", "C_ss", "C_st", "C_tt", "C_t"})
    for (int n : {8, 10, 12})
      if (id == coeff + "_neg_n" + std::to_string(n)) return rigor::coefficient_claim(coeff, n);
  throw ConfigError("unknown rigor claim '" + id + "'");
}

candidate::CandidateParams candidate_for(const RunConfig& c) {
  auto p = candidate::CandidateParams::for_n(c.n());
  p.include_phi0 = c.include_phi0;
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw StageError("cannot write " + path.string());
}

json config_json(const RunConfig& c) {
  return {{"m", c.m},
          {"n", c.n()},
          {"R", c.R},
          {"h", c.h},
          {"stages", c.stages},
          {"threads", c.threads},
          {"solver",
           {{"newton_tol", c.solver.newton_tol},
            {"max_newton_iters", c.solver.max_newton_iters},
            {"damping", c.solver.damping},
            {"linear_tol", c.solver.linear_tol}}},
          {"suite",
           {{"checks", c.suite_checks},
            {"kappa", c.suite.kappa},
            {"exclusion", c.suite.exclusion},
            {"far_field", c.suite.far_field},
            {"kappa_axis", c.suite.kappa_axis}}},
          {"supersolution",
           {{"tolerance", c.supersolution.tolerance},
            {"phi_floor", c.supersolution.phi_floor},
            {"exclusion", c.supersolution.exclusion},
            {"far_field", c.supersolution.far_field},
            {"include_phi0", c.include_phi0}}},
          {"spectrum",
           {{"tol", c.eig.tol},
            {"max_iters", c.eig.max_iters},
            {"shift", c.eig.shift},
            {"block", c.eig.block},
            {"seed", c.eig.seed}}},
          {"rigor",
           {{"claims", c.rigor_claims},
            {"margin", c.rigor_margin},
            {"max_depth", c.rigor_max_depth},
            {"min_width", c.rigor_min_width}}},
          {"output", {{"out", c.out_dir.string()}, {"cache", cache_policy_name(c.cache)}}},
          {"text", config_text(c)}};
}

solver::SaddleSolution solve_stage(const RunConfig& c, bool* reused) {
  const auto params = forms::DimensionParams::from_m(c.m);
  const auto grid = solver::build_grid(c.R, c.h);
  *reused = false;
  if (c.cache == CachePolicy::off) return solver::newton_solve(params, c.solver, grid);
  const auto dir = c.resolved_cache_dir();
  std::filesystem::create_directories(dir);
  if (c.cache == CachePolicy::refresh)
    std::filesystem::remove(dir / solver::cache_file_name(c.m, c.R, c.h, c.solver.newton_tol));
  return solver::solve_cached(dir, params, c.solver, grid, reused);
}

}  // namespace

std::vector<std::string> default_claim_ids(int n) {
  const std::string ns = std::to_string(n);
  return {"defect_m" + std::to_string(n / 2), "C_s_neg_n" + ns, "C_ss_neg_n" + ns, "C_st_neg_n" + ns};
}

std::vector<std::string> RunReport::failures() const {
  std::vector<std::string> out;
  for (const auto& r : suite)
    if (!r.informational && !r.pass)
      out.push_back(fmt::format("suite check {} failed (worst margin {:.3e} at s={:g}, t={:g})", r.id,
                                r.worst_margin, r.worst_s, r.worst_t));
  if (supersolution && !supersolution->pass)
    out.push_back(fmt::format("supersolution failed (max L Phi {:.3e})", supersolution->extras.count("max_LPhi")
                                                                           ? supersolution->extras.at("max_LPhi")
                                                                           : NAN));
  if (spectrum && !spectrum->pass)
    out.push_back(fmt::format("spectrum: lambda_min {:.6g} violates {}", spectrum->lambda_min, spectrum->expectation));
  for (const auto& p : proofs)
    if (p.status != rigor::ProofStatus::proven)
      out.push_back(fmt::format("proof {} undecided ({} frontier boxes)", p.claim_id, p.frontier.size()));
  if (certificate && !certificate->issued) out.push_back("certificate refused: " + certificate->reason);
  return out;
}

RunReport run(RunConfig config, const ProgressFn& progress) {
  config.normalize();
  std::vector<rigor::ClaimSpec> claims;
  if (config.wants("rigor"))
    for (const auto& id : config.rigor_claims.empty() ? default_claim_ids(config.n()) : config.rigor_claims)
      claims.push_back(claim_by_id(id));

  RunReport report;
  report.config = config;
  auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  for (const auto& stage : config.stages) {
    say("stage " + stage);
    const auto start = std::chrono::steady_clock::now();
    if (stage == "solve") {
      bool reused = false;
      report.solution = solve_stage(config, &reused);
      const auto& sol = *report.solution;
      report.solver = SolverMetadata{config.m,
                                     sol.grid.R,
                                     sol.grid.h,
                                     sol.grid.N,
                                     sol.residual_norm,
                                     sol.newton_iterations,
                                     spectral::solution_hash(sol),
                                     reused};
      say(fmt::format("solved m={} N={} residual {:.3e}{}", config.m, sol.grid.N, sol.residual_norm,
                      reused ? " (cached)" : ""));
    } else if (stage == "suite") {
      auto opts = config.suite;
      opts.threads = config.threads;
      auto all = verifier::run_inequality_suite(*report.solution, opts);
      if (config.suite_checks.empty()) {
        report.suite = std::move(all);
      } else {
        for (const auto& r : all)
          if (std::find(config.suite_checks.begin(), config.suite_checks.end(), r.id) != config.suite_checks.end())
            report.suite.push_back(r);
      }
    } else if (stage == "supersolution") {
      const auto params = candidate_for(config);
      report.supersolution = verifier::verify_supersolution(*report.solution, params, config.supersolution);
      report.diagnostics.push_back(verifier::e3_diagnostic(*report.solution, params, config.supersolution));
      report.diagnostics.push_back(verifier::t_ratio_diagnostic(report.solution->grid, params));
    } else if (stage == "spectrum") {
      const auto a = spectral::assemble(*report.solution);
      const auto e = spectral::min_eigenvalue(a, config.eig);
      SpectrumResult s;
      s.m = config.m;
      s.lambda_min = e.lambda_min;
      s.residual_norm = e.residual_norm;
      s.iterations = e.iterations;
      s.expectation = config.m <= 3 ? "lambda_min < -0.001" : "lambda_min > -0.01";
      s.pass = config.m <= 3 ? e.lambda_min < -0.001 : e.lambda_min > -0.01;
      report.spectrum = s;
    } else if (stage == "rigor") {
      for (auto& claim : claims) {
        auto opts = claim.options;
        opts.margin = config.rigor_margin;
        opts.max_depth = config.rigor_max_depth;
        opts.min_width = config.rigor_min_width;
        opts.threads = config.threads;
        say("proving " + claim.id);
        report.proofs.push_back(rigor::prove_nonpositive(claim.tape, claim.box, opts, claim.id));
      }
    } else if (stage == "signmaps") {
      report.sign_map_files = export_report(report, "signmaps", config.out_dir / "signmaps");
    } else if (stage == "certificate") {
      std::vector<spectral::SealedReport> sealed;
      sealed.push_back(spectral::seal(*report.supersolution));
      for (const auto& r : report.suite) sealed.push_back(spectral::seal(r));
      report.certificate = spectral::stability_certificate(*report.solution, candidate_for(config), sealed);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.timings.push_back({stage, secs});
  }
  return report;
}

std::string run_report_json(const RunReport& r, bool include_runtime) {
  json j;
  j["schema_version"] = kRunReportSchemaVersion;
  j["tool"] = {{"name", "saddlecheck"}, {"version", kToolVersion}};
  j["config"] = config_json(r.config);
  if (r.solver) {
    const auto& s = *r.solver;
    j["solver"] = {{"m", s.m},
                   {"R", s.R},
                   {"h", s.h},
                   {"N", s.N},
                   {"residual_norm", s.residual_norm},
                   {"newton_iterations", s.newton_iterations},
                   {"solution_sha256", s.solution_hash}};
  }
  if (!r.suite.empty() || r.config.wants("suite")) {
    json reports = json::array();
    for (const auto& c : r.suite) reports.push_back(json::parse(verifier::report_json(c)));
    j["suite"] = {{"passes", verifier::suite_passes(r.suite)}, {"reports", reports}};
  }
  if (r.supersolution) j["supersolution"] = json::parse(verifier::report_json(*r.supersolution));
  if (!r.diagnostics.empty()) {
    json d = json::array();
    for (const auto& c : r.diagnostics) d.push_back(json::parse(verifier::report_json(c)));
    j["diagnostics"] = d;
  }
  if (r.spectrum) {
    const auto& s = *r.spectrum;
    j["spectrum"] = {{"m", s.m},
                     {"lambda_min", num(s.lambda_min)},
                     {"residual_norm", num(s.residual_norm)},
                     {"iterations", s.iterations},
                     {"expectation", s.expectation},
                     {"pass", s.pass}};
  }
  if (!r.proofs.empty()) {
    json proofs = json::array();
    for (const auto& p : r.proofs) {
      json t = json::parse(rigor::proof_trace_json(p));
      t.erase("seconds");
      proofs.push_back(std::move(t));
    }
    j["proofs"] = proofs;
  }
  if (r.certificate) j["certificate"] = json::parse(spectral::certificate_json(*r.certificate));
  if (!r.sign_map_files.empty()) {
    json files = json::array();
    for (const auto& f : r.sign_map_files) files.push_back(f.filename().string());
    j["sign_maps"] = files;
  }
  const auto fails = r.failures();
  j["verdict"] = {{"status", fails.empty() ? "PASS" : "FAIL"}, {"failures", fails}};
  if (include_runtime) {
    json timings = json::object();
    for (const auto& t : r.timings) timings[t.stage] = t.seconds;
    json proof_secs = json::object();
    for (const auto& p : r.proofs) proof_secs[p.claim_id] = p.seconds;
    j["runtime"] = {{"stage_seconds", timings},
                    {"proof_seconds", proof_secs},
                    {"cache_reused", r.solver ? r.solver->cache_reused : false}};
  }
  return j.dump(1);
}

std::string summary_line(const RunReport& r) {
  const auto fails = r.failures();
  std::string stages;
  for (const auto& s : r.config.stages) stages += (stages.empty() ? "" : ",") + s;
  std::string out = fmt::format("SADDLECHECK status={} stages={} failed={} m={} n={} R={:g} h={:g}",
                                fails.empty() ? "PASS" : "FAIL", stages, fails.size(), r.config.m, r.config.n(),
                                r.config.R, r.config.h);
  if (!r.suite.empty()) {
    int ok = 0, counted = 0;
    for (const auto& c : r.suite)
      if (!c.informational) {
        ++counted;
        ok += c.pass;
      }
    out += fmt::format(" suite={}/{}", ok, counted);
  }
  if (r.supersolution && r.supersolution->extras.count("max_LPhi"))
    out += fmt::format(" max_LPhi={:.3e}", r.supersolution->extras.at("max_LPhi"));
  if (r.spectrum) out += fmt::format(" lambda_min={:.6g}", r.spectrum->lambda_min);
  if (!r.proofs.empty()) {
    int proven = 0;
    for (const auto& p : r.proofs) proven += p.status == rigor::ProofStatus::proven;
    out += fmt::format(" proofs={}/{}", proven, r.proofs.size());
  }
  if (r.certificate) out += fmt::format(" certificate={}", r.certificate->issued ? "issued" : "refused");
  return out;
}

std::string fields_csv(const solver::SaddleSolution& sol) {
  const std::vector<const solver::Field*> f = {&sol.u,    &sol.u_s,  &sol.u_t, &sol.u_ss, &sol.u_st,
                                               &sol.u_tt, &sol.u_y,  &sol.u_z};
  std::string out = fmt::format("# h={:.17g} N={}\n", sol.grid.h, sol.grid.N);
  out += "s,t,u,u_s,u_t,u_ss,u_st,u_tt,u_y,u_z\n";
  const int n = sol.grid.N + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out += fmt::format("{:.17g},{:.17g}", sol.grid.coord(i), sol.grid.coord(j));
      for (const auto* x : f) out += fmt::format(",{:.17g}", (*x)(i, j));
      out += '\n';
    }
  return out;
}

ImportedFields read_fields_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ImportedFields out;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "# h=%lf N=%d", &out.h, &out.N) != 2 || out.N < 1)
    throw std::invalid_argument("fields csv: missing '# h=... N=...' header");
  if (!std::getline(in, line)) throw std::invalid_argument("fields csv: missing column header");
  const auto cols = split_list(line);
  if (cols.size() < 3 || cols[0] != "s" || cols[1] != "t")
    throw std::invalid_argument("fields csv: columns must start with s,t");
  out.names.assign(cols.begin() + 2, cols.end());
  const int n = out.N + 1;
  out.fields.assign(out.names.size(), solver::Field::Zero(n, n));
  long long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_list(line);
    if (cells.size() != cols.size()) throw std::invalid_argument("fields csv: ragged row");
    const long long i = rows / n, j = rows % n;
    if (i >= n) throw std::invalid_argument("fields csv: too many rows");
    for (std::size_t k = 0; k < out.names.size(); ++k)
      out.fields[k](i, j) = std::strtod(cells[k + 2].c_str(), nullptr);
    ++rows;
  }
  if (rows != static_cast<long long>(n) * n) throw std::invalid_argument("fields csv: row count mismatch");
  return out;
}

std::vector<std::filesystem::path> export_report(const RunReport& r, const std::string& what,
                                                 const std::filesystem::path& dir) {
  if (what == "fields" || what == "csv") {
    if (!r.solution) throw StageError("export " + what + ": no solve stage data in this report");
    std::filesystem::create_directories(dir);
    const auto path = dir / "fields.csv";
    write_file(path, fields_csv(*r.solution));
    return {path};
  }
  if (what == "signmaps" || what == "svg") {
    if (!r.solution) throw StageError("export " + what + ": no solve stage data in this report");
    const int n = r.solution->params.n;
    if (n != 8 && n != 10 && n != 12)
      throw StageError(fmt::format("export {}: sign maps need n in {{8, 10, 12}}, report has n = {}", what, n));
    auto params = candidate::CandidateParams::for_n(n);
    params.include_phi0 = r.config.include_phi0;
    std::filesystem::create_directories(dir);
    return verifier::write_sign_maps(dir, verifier::candidate_map_fields(*r.solution, params), r.solution->grid);
  }
  if (what == "json") {
    std::filesystem::create_directories(dir);
    const auto path = dir / "report.json";
    write_file(path, run_report_json(r));
    return {path};
  }
  throw ConfigError("unknown export kind '" + what + "' (fields, csv, signmaps, svg, json)");
}

}  // namespace saddle::pipeline
