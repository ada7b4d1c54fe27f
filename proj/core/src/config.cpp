#include "saddlecheck/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace saddle::pipeline {

namespace {

namespace pt = boost::property_tree;

bool needs_solution(const std::string& stage) { return stage != "rigor" && stage != "solve"; }
bool needs_candidate(const std::string& stage) {
  return stage == "supersolution" || stage == "signmaps" || stage == "certificate";
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key) {
  try {
    return tree.get<T>(pt::ptree::path_type(key, '.'));
  } catch (const pt::ptree_error& e) {
    throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

bool get_bool(const pt::ptree& tree, const std::string& key) {
  const auto v = get<std::string>(tree, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(fmt::format("config key '{}': expected a boolean, got '{}'", key, v));
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

const char* cache_policy_name(CachePolicy p) {
  switch (p) {
    case CachePolicy::use:
      return "use";
    case CachePolicy::refresh:
      return "refresh";
    case CachePolicy::off:
      return "off";
  }
  return "use";
}

CachePolicy parse_cache_policy(const std::string& s) {
  if (s == "use") return CachePolicy::use;
  if (s == "refresh") return CachePolicy::refresh;
  if (s == "off") return CachePolicy::off;
  throw ConfigError("unknown cache policy '" + s + "' (use, refresh, off)");
}

bool RunConfig::wants(const std::string& stage) const {
  return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

void RunConfig::normalize() {
  std::set<std::string> requested;
  for (const auto& s : stages) {
    if (std::find(kAllStages.begin(), kAllStages.end(), s) == kAllStages.end())
      throw ConfigError("unknown stage '" + s + "'");
    requested.insert(s);
  }
  if (requested.empty()) throw ConfigError("no stages requested");
  if (requested.count("certificate")) requested.insert("supersolution");
  for (const auto& s : std::set<std::string>(requested))
    if (needs_solution(s)) requested.insert("solve");
  stages.clear();
  for (const auto& s : kAllStages)
    if (requested.count(s)) stages.push_back(s);
  validate();
}

void RunConfig::validate() const {
  if (stages.empty()) throw ConfigError("no stages requested");
  for (const auto& s : stages)
    if (std::find(kAllStages.begin(), kAllStages.end(), s) == kAllStages.end())
      throw ConfigError("unknown stage '" + s + "'");
  if (m < 1 || m > 6) throw ConfigError(fmt::format("m = {} outside 1..6", m));
  for (const auto& s : stages)
    if (needs_candidate(s) && (n() < 8 || n() > 12))
      throw ConfigError(fmt::format("stage '{}' needs n in {{8, 10, 12}}, got n = {}", s, n()));
  if (wants("rigor") && rigor_claims.empty() && (n() < 8 || n() > 12))
    throw ConfigError(fmt::format("no default rigor claims for n = {}", n()));
  if (!(R >= 8.0)) throw ConfigError(fmt::format("R = {} below 8", R));
  if (!(h > 0.0 && h <= 0.2)) throw ConfigError(fmt::format("h = {} outside (0, 0.2]", h));
  const double cells = R / h;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells)
    throw ConfigError(fmt::format("R / h = {} is not an integer", cells));
  if (!(solver.newton_tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (solver.max_newton_iters < 1) throw ConfigError("solver iteration cap must be positive");
  if (!(supersolution.tolerance >= 0.0)) throw ConfigError("supersolution tolerance must be nonnegative");
  if (suite.exclusion < 0 || supersolution.exclusion < 0) throw ConfigError("exclusion must be nonnegative");
  if (!(eig.tol > 0.0) || eig.max_iters < 1) throw ConfigError("invalid eigensolver tolerance or iteration cap");
  if (rigor_max_depth < 1 || !(rigor_min_width > 0.0)) throw ConfigError("invalid rigor depth or width");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  const auto ids = verifier::suite_check_ids();
  for (const auto& c : suite_checks)
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) throw ConfigError("unknown suite check '" + c + "'");
}

std::filesystem::path RunConfig::resolved_cache_dir() const {
  if (!cache_dir.empty()) return cache_dir;
  if (const char* env = std::getenv("SADDLECHECK_CACHE_DIR"); env && *env) return env;
  return out_dir / "cache";
}

RunConfig parse_config(const std::string& text, RunConfig c) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  static const std::map<std::string, std::set<std::string>> known = {
      {"run", {"m", "n", "R", "h", "stages", "threads"}},
      {"solver", {"newton_tol", "max_newton_iters", "damping", "linear_tol"}},
      {"suite", {"checks", "kappa", "exclusion", "far_field", "kappa_axis"}},
      {"supersolution", {"tolerance", "phi_floor", "exclusion", "far_field", "include_phi0"}},
      {"spectrum", {"tol", "max_iters", "shift", "block", "seed"}},
      {"rigor", {"claims", "margin", "max_depth", "min_width"}},
      {"output", {"out", "cache", "cache_dir"}},
  };
  for (const auto& [section, body] : tree) {
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError("nested key in [" + section + "]");
      if (!it->second.count(key)) throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
    }
  }
  auto has = [&](const std::string& k) { return tree.get_child_optional(pt::ptree::path_type(k, '.')).has_value(); };
  if (has("run.m") && has("run.n")) throw ConfigError("set either m or n, not both");
  if (has("run.m")) c.m = get<int>(tree, "run.m");
  if (has("run.n")) {
    const int n = get<int>(tree, "run.n");
    if (n % 2) throw ConfigError(fmt::format("n = {} is odd", n));
    c.m = n / 2;
  }
  if (has("run.R")) c.R = get<double>(tree, "run.R");
  if (has("run.h")) c.h = get<double>(tree, "run.h");
  if (has("run.stages")) c.stages = split_list(get<std::string>(tree, "run.stages"));
  if (has("run.threads")) c.threads = get<int>(tree, "run.threads");

  if (has("solver.newton_tol")) c.solver.newton_tol = get<double>(tree, "solver.newton_tol");
  if (has("solver.max_newton_iters")) c.solver.max_newton_iters = get<int>(tree, "solver.max_newton_iters");
  if (has("solver.damping")) c.solver.damping = get<int>(tree, "solver.damping");
  if (has("solver.linear_tol")) c.solver.linear_tol = get<double>(tree, "solver.linear_tol");

  if (has("suite.checks")) c.suite_checks = split_list(get<std::string>(tree, "suite.checks"));
  if (has("suite.kappa")) c.suite.kappa = get<double>(tree, "suite.kappa");
  if (has("suite.exclusion")) c.suite.exclusion = get<int>(tree, "suite.exclusion");
  if (has("suite.far_field")) c.suite.far_field = get<double>(tree, "suite.far_field");
  if (has("suite.kappa_axis")) c.suite.kappa_axis = get<double>(tree, "suite.kappa_axis");

  if (has("supersolution.tolerance")) c.supersolution.tolerance = get<double>(tree, "supersolution.tolerance");
  if (has("supersolution.phi_floor")) c.supersolution.phi_floor = get<double>(tree, "supersolution.phi_floor");
  if (has("supersolution.exclusion")) c.supersolution.exclusion = get<int>(tree, "supersolution.exclusion");
  if (has("supersolution.far_field")) c.supersolution.far_field = get<double>(tree, "supersolution.far_field");
  if (has("supersolution.include_phi0")) c.include_phi0 = get_bool(tree, "supersolution.include_phi0");

  if (has("spectrum.tol")) c.eig.tol = get<double>(tree, "spectrum.tol");
  if (has("spectrum.max_iters")) c.eig.max_iters = get<int>(tree, "spectrum.max_iters");
  if (has("spectrum.shift")) c.eig.shift = get<double>(tree, "spectrum.shift");
  if (has("spectrum.block")) c.eig.block = get<int>(tree, "spectrum.block");
  if (has("spectrum.seed")) c.eig.seed = get<std::uint64_t>(tree, "spectrum.seed");

  if (has("rigor.claims")) c.rigor_claims = split_list(get<std::string>(tree, "rigor.claims"));
  if (has("rigor.margin")) c.rigor_margin = get<double>(tree, "rigor.margin");
  if (has("rigor.max_depth")) c.rigor_max_depth = get<int>(tree, "rigor.max_depth");
  if (has("rigor.min_width")) c.rigor_min_width = get<double>(tree, "rigor.min_width");

  if (has("output.out")) c.out_dir = get<std::string>(tree, "output.out");
  if (has("output.cache")) c.cache = parse_cache_policy(get<std::string>(tree, "output.cache"));
  if (has("output.cache_dir")) c.cache_dir = get<std::string>(tree, "output.cache_dir");
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string config_text(const RunConfig& c) {
  std::string out;
  out += fmt::format("[run]\nm = {}\nR = {:.17g}\nh = {:.17g}\nstages = {}\nthreads = {}\n\n", c.m, c.R, c.h,
                     join(c.stages), c.threads);
  out += fmt::format("[solver]\nnewton_tol = {:.17g}\nmax_newton_iters = {}\ndamping = {}\nlinear_tol = {:.17g}\n\n",
                     c.solver.newton_tol, c.solver.max_newton_iters, c.solver.damping, c.solver.linear_tol);
  out += "[suite]\n";
  if (!c.suite_checks.empty()) out += "checks = " + join(c.suite_checks) + "\n";
  out += fmt::format("kappa = {:.17g}\nexclusion = {}\nfar_field = {:.17g}\nkappa_axis = {:.17g}\n\n", c.suite.kappa,
                     c.suite.exclusion, c.suite.far_field, c.suite.kappa_axis);
  out += fmt::format(
      "[supersolution]\ntolerance = {:.17g}\nphi_floor = {:.17g}\nexclusion = {}\nfar_field = {:.17g}\n"
      "include_phi0 = {}\n\n",
      c.supersolution.tolerance, c.supersolution.phi_floor, c.supersolution.exclusion, c.supersolution.far_field,
      c.include_phi0 ? "true" : "false");
  out += fmt::format("[spectrum]\ntol = {:.17g}\nmax_iters = {}\nshift = {:.17g}\nblock = {}\nseed = {}\n\n", c.eig.tol,
                     c.eig.max_iters, c.eig.shift, c.eig.block, c.eig.seed);
  out += "[rigor]\n";
  if (!c.rigor_claims.empty()) out += "claims = " + join(c.rigor_claims) + "\n";
  out += fmt::format("margin = {:.17g}\nmax_depth = {}\nmin_width = {:.17g}\n\n", c.rigor_margin, c.rigor_max_depth,
                     c.rigor_min_width);
  out += fmt::format("[output]\nout = {}\ncache = {}\n", c.out_dir.string(), cache_policy_name(c.cache));
  if (!c.cache_dir.empty()) out += "cache_dir = " + c.cache_dir.string() + "\n";
  return out;
}

}  // namespace saddle::pipeline
