#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "saddlecheck/hash.hpp"
#include "saddlecheck/solution_cache.hpp"

using namespace saddle::solver;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("saddle_cache_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const SaddleSolution& base() {
  static const SaddleSolution sol =
      newton_solve(saddle::forms::DimensionParams::from_m(4), SolverConfig{}, build_grid(8, 0.2));
  return sol;
}

}  // namespace

TEST(Hash, KnownDigest) {
  EXPECT_EQ(saddle::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(SolutionCache, RoundTripIsBitwise) {
  const fs::path file = fresh_dir("rt") / "u.sdl";
  save_solution(file, base());
  const CacheHeader hdr = read_cache_header(file);
  EXPECT_EQ(hdr.m, 4);
  EXPECT_EQ(hdr.N, 40);
  EXPECT_EQ(hdr.content_hash.size(), 64u);
  const SaddleSolution back = load_solution(file, 4, 8, 0.2, 1e-10);
  EXPECT_EQ((back.u - base().u).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((back.u_st - base().u_st).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(back.residual_norm, base().residual_norm);
}

TEST(SolutionCache, HeaderMismatchRejected) {
  const fs::path file = fresh_dir("mm") / "u.sdl";
  save_solution(file, base());
  EXPECT_THROW(load_solution(file, 5, 8, 0.2, 1e-10), CacheError);
  EXPECT_THROW(load_solution(file, 4, 8, 0.1, 1e-10), CacheError);
  EXPECT_THROW(load_solution(file, 4, 8, 0.2, 1e-12), CacheError);
  EXPECT_NO_THROW(load_solution(file, 4, 8, 0.2, 1e-8));
}

TEST(SolutionCache, TamperingDetected) {
  const fs::path file = fresh_dir("tamper") / "u.sdl";
  save_solution(file, base());
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-100, std::ios::end);
    char c = 0x5a;
    f.write(&c, 1);
  }
  EXPECT_THROW(load_solution(file, 4, 8, 0.2, 1e-10), CacheError);
}

TEST(SolutionCache, SolveCachedReusesAndRepairs) {
  const fs::path dir = fresh_dir("reuse");
  const auto p = saddle::forms::DimensionParams::from_m(4);
  bool reused = true;
  const SaddleSolution a = solve_cached(dir, p, SolverConfig{}, build_grid(8, 0.2), &reused);
  EXPECT_FALSE(reused);
  const SaddleSolution b = solve_cached(dir, p, SolverConfig{}, build_grid(8, 0.2), &reused);
  EXPECT_TRUE(reused);
  EXPECT_EQ((a.u - b.u).cwiseAbs().maxCoeff(), 0.0);
  const fs::path file = dir / cache_file_name(4, 8, 0.2, 1e-10);
  fs::resize_file(file, fs::file_size(file) - 8);
  const SaddleSolution c = solve_cached(dir, p, SolverConfig{}, build_grid(8, 0.2), &reused);
  EXPECT_FALSE(reused);
  EXPECT_EQ((a.u - c.u).cwiseAbs().maxCoeff(), 0.0);
}
