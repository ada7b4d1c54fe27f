#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddlecheck/config.hpp"
#include "saddlecheck/prover.hpp"
#include "saddlecheck/solver.hpp"
#include "saddlecheck/spectral.hpp"
#include "saddlecheck/verifier.hpp"

namespace saddle::pipeline {

inline constexpr int kRunReportSchemaVersion = 1;

class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverMetadata {
  int m = 0;
  double R = 0.0;
  double h = 0.0;
  int N = 0;
  double residual_norm = 0.0;
  int newton_iterations = 0;
  std::string solution_hash;
  bool cache_reused = false;
};

struct SpectrumResult {
  int m = 0;
  double lambda_min = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  // m <= 3: lambda_min < -0.001; m >= 4: lambda_min > -0.01.
  std::string expectation;
  bool pass = false;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  RunConfig config;
  std::optional<SolverMetadata> solver;
  std::vector<verifier::CheckReport> suite;
  std::optional<verifier::CheckReport> supersolution;
  // Informational diagnostics that accompany the supersolution stage.
  std::vector<verifier::CheckReport> diagnostics;
  std::optional<SpectrumResult> spectrum;
  std::vector<rigor::ProofResult> proofs;
  std::optional<spectral::Certificate> certificate;
  std::vector<std::filesystem::path> sign_map_files;
  std::vector<StageTiming> timings;
  // Retained for export; not serialized.
  std::optional<solver::SaddleSolution> solution;

  // Human-readable reasons of every failed requested verification.
  std::vector<std::string> failures() const;
  bool passed() const { return failures().empty(); }
};

using ProgressFn = std::function<void(const std::string&)>;

// Normalizes and validates the config, then runs the requested stages in order.
// Throws ConfigError, solver::CacheError, solver::SolverError, spectral::EigError, StageError.
RunReport run(RunConfig config, const ProgressFn& progress = {});

// Schema v1. Everything except the "runtime" object is a deterministic function of the config and binary.
std::string run_report_json(const RunReport& report, bool include_runtime = true);

// One line: "SADDLECHECK status=PASS|FAIL stages=... failed=<n> [key=value ...]".
std::string summary_line(const RunReport& report);

// Writes fields.csv / signmaps/ / report.json into dir. `what` is fields|csv|signmaps|svg|json.
// Throws StageError when the stage data behind the export is missing.
std::vector<std::filesystem::path> export_report(const RunReport& report, const std::string& what,
                                                 const std::filesystem::path& dir);

// "s,t,u,u_s,u_t,u_ss,u_st,u_tt,u_y,u_z" one row per quadrant node, i major.
std::string fields_csv(const solver::SaddleSolution& solution);

struct ImportedFields {
  double h = 0.0;
  int N = 0;
  std::vector<std::string> names;
  std::vector<solver::Field> fields;
};
ImportedFields read_fields_csv(const std::string& text);

// Default rigor claim ids for dimension n: defect_m<n/2>, C_s/C_ss/C_st_neg_n<n>.
std::vector<std::string> default_claim_ids(int n);

}  // namespace saddle::pipeline
