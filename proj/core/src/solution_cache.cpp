#include "saddlecheck/solution_cache.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "saddlecheck/hash.hpp"

namespace saddle::solver {

namespace {

constexpr const char* kMagic = "SADDLECACHE";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_fields(const CacheHeader& h) {
  std::ostringstream os;
  os << "m=" << h.m << " R=" << fmt_double(h.R) << " h=" << fmt_double(h.h) << " N=" << h.N
     << " newton_tol=" << fmt_double(h.newton_tol) << " residual_norm=" << fmt_double(h.residual_norm)
     << " iterations=" << h.newton_iterations;
  return os.str();
}

std::string payload_bytes(const Field& u) {
  // Row-major order: u(i, 0), u(i, 1), ...
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = u;
  return std::string(reinterpret_cast<const char*>(rm.data()), sizeof(double) * rm.size());
}

std::string content_hash(const CacheHeader& h, const std::string& payload) {
  return sha256_hex(header_fields(h) + "\n" + payload);
}

CacheHeader parse_header(const std::string& line) {
  std::istringstream is(line);
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != kMagic) throw CacheError("solution cache: bad magic");
  if (version != 1) throw CacheError("solution cache: unsupported version " + std::to_string(version));
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw CacheError("solution cache: malformed header token " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  CacheHeader h;
  h.version = version;
  try {
    h.m = std::stoi(kv.at("m"));
    h.R = std::stod(kv.at("R"));
    h.h = std::stod(kv.at("h"));
    h.N = std::stoi(kv.at("N"));
    h.newton_tol = std::stod(kv.at("newton_tol"));
    h.residual_norm = std::stod(kv.at("residual_norm"));
    h.newton_iterations = std::stoi(kv.at("iterations"));
    h.content_hash = kv.at("sha256");
  } catch (const std::exception&) {
    throw CacheError("solution cache: incomplete header");
  }
  return h;
}

}  // namespace

void save_solution(const std::filesystem::path& path, const SaddleSolution& solution) {
  CacheHeader h;
  h.m = solution.params.m;
  h.R = solution.grid.R;
  h.h = solution.grid.h;
  h.N = solution.grid.N;
  h.newton_tol = solution.config.newton_tol;
  h.residual_norm = solution.residual_norm;
  h.newton_iterations = solution.newton_iterations;
  const std::string payload = payload_bytes(solution.u);
  h.content_hash = content_hash(h, payload);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("solution cache: cannot write " + tmp.string());
    out << kMagic << " 1 " << header_fields(h) << " sha256=" << h.content_hash << "\n";
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw CacheError("solution cache: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CacheHeader read_cache_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("solution cache: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  return parse_header(line);
}

SaddleSolution load_solution(const std::filesystem::path& path, int m, double R, double h, double newton_tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("solution cache: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  const CacheHeader hdr = parse_header(line);
  if (hdr.m != m || hdr.R != R || hdr.h != h)
    throw CacheError("solution cache: header does not match request (m, R, h)");
  if (hdr.newton_tol > newton_tol) throw CacheError("solution cache: cached tolerance looser than requested");
  const Grid grid = build_grid(R, h);
  if (hdr.N != grid.N) throw CacheError("solution cache: grid size mismatch");
  const std::size_t count = static_cast<std::size_t>(grid.N + 1) * (grid.N + 1);
  std::string payload(count * sizeof(double), '\0');
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) throw CacheError("solution cache: truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw CacheError("solution cache: trailing bytes");
  if (content_hash(hdr, payload) != hdr.content_hash) throw CacheError("solution cache: content hash mismatch");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(grid.N + 1, grid.N + 1);
  std::memcpy(rm.data(), payload.data(), payload.size());
  SaddleSolution sol;
  sol.params = DimensionParams::from_m(m);
  sol.grid = grid;
  sol.config.newton_tol = hdr.newton_tol;
  sol.u = rm;
  sol.residual_norm = hdr.residual_norm;
  sol.newton_iterations = hdr.newton_iterations;
  return compute_derivatives(sol);
}

std::string cache_file_name(int m, double R, double h, double newton_tol) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "u_m%d_R%g_h%g_tol%g.sdl", m, R, h, newton_tol);
  return buf;
}

SaddleSolution solve_cached(const std::filesystem::path& dir, const DimensionParams& params,
                            const SolverConfig& config, const Grid& grid, bool* reused) {
  const std::filesystem::path file = dir / cache_file_name(params.m, grid.R, grid.h, config.newton_tol);
  if (std::filesystem::exists(file)) {
    try {
      SaddleSolution sol = load_solution(file, params.m, grid.R, grid.h, config.newton_tol);
      sol.config = config;
      if (reused) *reused = true;
      return sol;
    } catch (const CacheError&) {
      // Stale or corrupt entry: fall through and re-solve.
    }
  }
  SaddleSolution sol = newton_solve(params, config, grid);
  save_solution(file, sol);
  if (reused) *reused = false;
  return sol;
}

}  // namespace saddle::solver
