#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "saddlecheck/solver.hpp"

namespace saddle::solver {

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CacheHeader {
  int version = 1;
  int m = 0;
  double R = 0.0;
  double h = 0.0;
  int N = 0;
  double newton_tol = 0.0;
  double residual_norm = 0.0;
  int newton_iterations = 0;
  std::string content_hash;
};

// Binary container: one text header line followed by the row-major u field (little-endian doubles).
void save_solution(const std::filesystem::path& path, const SaddleSolution& solution);

CacheHeader read_cache_header(const std::filesystem::path& path);

// Loads and validates header (m, R, h, newton_tol) and the content hash; rebuilds derivatives.
// Throws CacheError on any mismatch or corruption.
SaddleSolution load_solution(const std::filesystem::path& path, int m, double R, double h, double newton_tol);

// Canonical cache file name for a request, e.g. "u_m4_R12_h0.05_tol1e-10.sdl".
std::string cache_file_name(int m, double R, double h, double newton_tol);

// Returns the cached solution when a valid file exists; otherwise solves, writes the file and returns it.
// `reused` reports which path was taken.
SaddleSolution solve_cached(const std::filesystem::path& dir, const DimensionParams& params,
                            const SolverConfig& config, const Grid& grid, bool* reused = nullptr);

}  // namespace saddle::solver
