#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "saddlecheck/candidate.hpp"
#include "saddlecheck/solver.hpp"

namespace saddle::verifier {

enum class Sign : std::int8_t { negative = -1, zero = 0, positive = 1, undefined = 2 };

// Per-node sign of a field on the quadrant; |value| <= tau counts as zero, NaN as undefined.
struct SignMap {
  std::string title;
  solver::Grid grid;
  double tau = 0.0;
  solver::Field values;
  std::vector<Sign> signs;  // row-major (i, j)

  Sign at(int i, int j) const { return signs[static_cast<std::size_t>(i) * (grid.N + 1) + j]; }
  long long count(Sign s) const;
};

SignMap sign_map(const solver::Field& field, const solver::Grid& grid, double tau = 0.0, std::string title = "");

// CSV with header "s,t,value,sign"; values printed with 17 significant digits.
std::string sign_map_csv(const SignMap& map);

// Fixed-palette SVG (one cell per node, s to the right, t upwards) with a legend.
std::string sign_map_svg(const SignMap& map);

// Fields behind the six n=8 maps: C_t/C_s - 0.9, C_ss/(C_st - C_tt) - 1, T(1 - lambda) - 1,
// L Phi on E1, the E3 bound margin, C_tt. NaN where a map is not defined.
struct NamedField {
  std::string name;
  std::string title;
  solver::Field field;
};
std::vector<NamedField> candidate_map_fields(const solver::SaddleSolution& solution,
                                             const candidate::CandidateParams& params);

// Writes <name>.svg and <name>.csv for each map; returns written paths.
std::vector<std::filesystem::path> write_sign_maps(const std::filesystem::path& dir,
                                                   const std::vector<NamedField>& fields, const solver::Grid& grid);

}  // namespace saddle::verifier
