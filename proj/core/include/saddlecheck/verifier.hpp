#pragma once

#include <map>
#include <string>
#include <vector>

#include "saddlecheck/candidate.hpp"
#include "saddlecheck/solver.hpp"

namespace saddle::verifier {

using solver::Field;
using solver::SaddleSolution;

inline constexpr int kReportSchemaVersion = 1;

// Per-check verdict. The worst node minimizes margin + tolerance; pass <=> worst_margin >= -tolerance_used.
struct CheckReport {
  std::string id;
  std::string statement;
  bool informational = false;
  bool pass = false;
  double worst_margin = 0.0;
  double worst_s = 0.0;
  double worst_t = 0.0;
  double tolerance_used = 0.0;
  // Smallest raw margin over the node set, without tolerance.
  double raw_min_margin = 0.0;
  long long nodes_checked = 0;
  long long nodes_excluded = 0;
  // Extra named quantities (region worst margins, fitted constants, ...).
  std::map<std::string, double> extras;
  std::string note;
};

struct SuiteOptions {
  double kappa = 10.0;
  // Nodes within this many grid steps of the cone or the axis are excluded.
  int exclusion = 2;
  // Length of the band s > R - far_field excluded next to the outer Dirichlet edge.
  double far_field = 2.0;
  // Tolerance factor for the cone-limit check 14 (one-sided in the rotated frame).
  double kappa_axis = 20.0;
  int threads = 1;
};

// Identifiers of the suite, in report order. Informational checks do not count toward the verdict.
std::vector<std::string> suite_check_ids();

// Runs the full inequality catalog on a solution with derivative fields.
std::vector<CheckReport> run_inequality_suite(const SaddleSolution& solution, const SuiteOptions& options = {});

// True iff every non-informational report passes.
bool suite_passes(const std::vector<CheckReport>& reports);

// Pointwise margin field of a node-wise suite check (NaN where not evaluated); tolerance scale in `scale`.
Field check_margin_field(const SaddleSolution& solution, const std::string& id, const SuiteOptions& options = {},
                         Field* scale = nullptr);

// Minimum margin of a check on each of the bands i - j = exclusion, ..., exclusion + bands - 1.
std::vector<double> cone_band_profile(const SaddleSolution& solution, const std::string& id, int bands,
                                      const SuiteOptions& options = {});

struct SupersolutionOptions {
  // LPhi <= tolerance at every checked node.
  double tolerance = 1e-8;
  // Phi >= phi_floor at every checked node.
  double phi_floor = 0.0;
  // Nodes need s, t >= exclusion * h.
  int exclusion = 1;
  double far_field = 0.0;
};

// LPhi <= tolerance and Phi >= floor on the triangle t <= s minus the axis band and the outer stencil band.
// extras: worst margins per region (E1, E2, E3), phi_min, max_LPhi.
CheckReport verify_supersolution(const SaddleSolution& solution, const candidate::CandidateParams& params,
                                 const SupersolutionOptions& options = {});

// |2(C_s - C_t) t u_tt*| < |L Phi0| at E3 nodes, u_tt* the column minimum of u_tt over r in {h, ..., t}.
CheckReport e3_diagnostic(const SaddleSolution& solution, const candidate::CandidateParams& params,
                          const SupersolutionOptions& options = {});

// Margin field of the E3 bound, |L Phi0| - |2(C_s - C_t) t u_tt*|, NaN outside E3.
Field e3_margin_field(const SaddleSolution& solution, const candidate::CandidateParams& params);

// T(r) in (0,1) on E1 grid nodes for r = max(0, 1 - lambda) and 8 values up to 1 - 1e-3; informational.
CheckReport t_ratio_diagnostic(const solver::Grid& grid, const candidate::CandidateParams& params);

// JSON array with schema version.
std::string reports_json(const std::vector<CheckReport>& reports);
std::string report_json(const CheckReport& report);

}  // namespace saddle::verifier
