#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddlecheck/solver.hpp"
#include "saddlecheck/spectral.hpp"
#include "saddlecheck/verifier.hpp"

namespace saddle::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CachePolicy { use, refresh, off };

// Stages in dependency order.
inline const std::vector<std::string> kAllStages = {"solve", "suite", "supersolution", "spectrum",
                                                    "rigor", "signmaps", "certificate"};

struct RunConfig {
  int m = 4;
  double R = 12.0;
  double h = 0.05;
  solver::SolverConfig solver;
  std::vector<std::string> stages = {"solve", "suite", "supersolution", "rigor"};

  // Empty selects every suite check.
  std::vector<std::string> suite_checks;
  verifier::SuiteOptions suite;
  verifier::SupersolutionOptions supersolution;
  bool include_phi0 = true;

  spectral::EigOptions eig;

  // Empty selects the default claims for the dimension.
  std::vector<std::string> rigor_claims;
  double rigor_margin = 0.0;
  int rigor_max_depth = 40;
  double rigor_min_width = 1e-4;

  std::filesystem::path out_dir = "saddlecheck_out";
  // Empty: SADDLECHECK_CACHE_DIR, then <out_dir>/cache.
  std::filesystem::path cache_dir;
  CachePolicy cache = CachePolicy::use;
  int threads = 1;

  int n() const { return 2 * m; }
  bool wants(const std::string& stage) const;

  // Adds prerequisite stages, orders stages, and checks every invariant; throws ConfigError.
  void normalize();
  void validate() const;
  std::filesystem::path resolved_cache_dir() const;
};

// Sectioned key = value text ([run], [solver], [suite], [supersolution], [spectrum], [rigor], [output]).
// Keys not listed in the documented set are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Canonical text form accepted by parse_config.
std::string config_text(const RunConfig& config);

const char* cache_policy_name(CachePolicy p);
CachePolicy parse_cache_policy(const std::string& s);
std::vector<std::string> split_list(const std::string& s);

}  // namespace saddle::pipeline
