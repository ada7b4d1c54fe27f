#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "saddlecheck/pipeline.hpp"

namespace pl = saddle::pipeline;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kError = 3 };

struct Flags {
  std::optional<int> n, m;
  std::optional<double> R, h, tol;
  std::optional<std::string> stages, out, cache;
  std::optional<int> threads;
  std::string config;
  std::string input;
  bool verbose = false;
};

void add_common(CLI::App* app, Flags& f, bool with_stages) {
  app->set_help_flag("--help", "Print this help message and exit");
  auto* n = app->add_option("--n", f.n, "Dimension n = 2m (8, 10 or 12 for candidate stages)");
  auto* m = app->add_option("--m", f.m, "Half dimension m in 1..6");
  n->excludes(m);
  app->add_option("--R", f.R, "Domain radius");
  app->add_option("--h", f.h, "Grid step");
  app->add_option("--tol", f.tol, "Newton residual tolerance");
  if (with_stages) app->add_option("--stages", f.stages, "Comma-separated stages");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--threads", f.threads, "Thread cap for every pool (0 = hardware)");
  app->add_option("--cache", f.cache, "Cache policy (use, refresh, off) or cache directory");
  app->add_option("--config", f.config, "Sectioned key = value run file; flags win")->check(CLI::ExistingFile);
  app->add_flag("-v,--verbose", f.verbose, "Debug logging");
}

pl::RunConfig build_config(const Flags& f, const std::vector<std::string>& default_stages) {
  pl::RunConfig c;
  c.stages = default_stages;
  if (!f.config.empty()) c = pl::load_config(f.config, c);
  if (f.n) {
    if (*f.n % 2) throw pl::ConfigError("n must be even");
    c.m = *f.n / 2;
  }
  if (f.m) c.m = *f.m;
  if (f.R) c.R = *f.R;
  if (f.h) c.h = *f.h;
  if (f.tol) c.solver.newton_tol = *f.tol;
  if (f.stages) c.stages = pl::split_list(*f.stages);
  if (f.out) c.out_dir = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.cache) {
    if (*f.cache == "use" || *f.cache == "refresh" || *f.cache == "off")
      c.cache = pl::parse_cache_policy(*f.cache);
    else
      c.cache_dir = *f.cache;
  }
  return c;
}

void print_report(const pl::RunReport& r) {
  if (r.solver)
    std::cout << fmt::format("solve      m={} N={} residual={:.3e} newton_iters={}{}\n", r.solver->m, r.solver->N,
                             r.solver->residual_norm, r.solver->newton_iterations,
                             r.solver->cache_reused ? " (cached)" : "");
  for (const auto& c : r.suite)
    std::cout << fmt::format("check {:<13} {:<4} worst={:+.3e} tol={:.1e} at (s,t)=({:g},{:g}){}\n", c.id,
                             c.informational ? "info" : (c.pass ? "PASS" : "FAIL"), c.worst_margin,
                             c.tolerance_used, c.worst_s, c.worst_t, c.note.empty() ? "" : "  " + c.note);
  if (r.supersolution) {
    const auto& s = *r.supersolution;
    std::cout << fmt::format("supersolution {} max_LPhi={:.3e} phi_min={:.3e} nodes={}\n", s.pass ? "PASS" : "FAIL",
                             s.extras.at("max_LPhi"), s.extras.at("phi_min"), s.nodes_checked);
  }
  for (const auto& d : r.diagnostics)
    std::cout << fmt::format("diagnostic {} {} {}\n", d.id, d.pass ? "holds" : "violated", d.note);
  if (r.spectrum)
    std::cout << fmt::format("spectrum   m={} lambda_min={:.6g} residual={:.1e} iters={} {}\n", r.spectrum->m,
                             r.spectrum->lambda_min, r.spectrum->residual_norm, r.spectrum->iterations,
                             r.spectrum->pass ? "PASS" : "FAIL");
  for (const auto& p : r.proofs)
    std::cout << fmt::format("proof {:<13} {} boxes={} frontier={} worst_upper={:.3e} {:.1f}s\n", p.claim_id,
                             saddle::rigor::status_name(p.status), p.boxes_examined, p.frontier.size(),
                             p.worst_accepted_upper, p.seconds);
  for (const auto& f : r.sign_map_files) std::cout << "map        " << f.string() << "\n";
  if (r.certificate)
    std::cout << "certificate " << (r.certificate->issued ? "issued: " + r.certificate->conclusion
                                                          : "refused: " + r.certificate->reason)
              << "\n";
  for (const auto& f : r.failures()) std::cout << "failure    " << f << "\n";
}

int execute(const Flags& f, const std::vector<std::string>& default_stages, const std::vector<std::string>& exports) {
  const pl::RunConfig config = build_config(f, default_stages);
  const pl::RunReport report =
      pl::run(config, [](const std::string& msg) { spdlog::info("{}", msg); });
  std::filesystem::create_directories(report.config.out_dir);
  for (const auto& what : exports)
    for (const auto& p : pl::export_report(report, what, report.config.out_dir)) spdlog::info("wrote {}", p.string());
  const auto json = pl::export_report(report, "json", report.config.out_dir);
  print_report(report);
  std::cout << pl::summary_line(report) << " report=" << json.front().string() << std::endl;
  return report.passed() ? kPass : kFail;
}

int show_report(const Flags& f) {
  std::ifstream in(f.input);
  if (!in) throw pl::ConfigError("cannot read report " + f.input);
  const auto j = nlohmann::json::parse(in);
  if (j.value("schema_version", 0) != pl::kRunReportSchemaVersion)
    throw pl::ConfigError("unsupported report schema in " + f.input);
  const auto& cfg = j.at("config");
  if (j.contains("solver"))
    std::cout << fmt::format("solve      m={} N={} residual={:.3e}\n", j["solver"]["m"].get<int>(),
                             j["solver"]["N"].get<int>(), j["solver"]["residual_norm"].get<double>());
  if (j.contains("suite"))
    for (const auto& c : j["suite"]["reports"])
      std::cout << fmt::format("check {:<13} {}\n", c["id"].get<std::string>(),
                               c["informational"].get<bool>() ? "info" : (c["pass"].get<bool>() ? "PASS" : "FAIL"));
  if (j.contains("supersolution"))
    std::cout << "supersolution " << (j["supersolution"]["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  if (j.contains("spectrum"))
    std::cout << "spectrum   lambda_min=" << j["spectrum"]["lambda_min"].dump() << "\n";
  if (j.contains("proofs"))
    for (const auto& p : j["proofs"])
      std::cout << fmt::format("proof {:<13} {}\n", p["claim_id"].get<std::string>(), p["status"].get<std::string>());
  if (j.contains("certificate"))
    std::cout << "certificate " << (j["certificate"]["issued"].get<bool>() ? "issued" : "refused") << "\n";
  const auto& verdict = j.at("verdict");
  for (const auto& fail : verdict.at("failures")) std::cout << "failure    " << fail.get<std::string>() << "\n";
  std::string stages;
  for (const auto& s : cfg.at("stages")) stages += (stages.empty() ? "" : ",") + s.get<std::string>();
  const std::string status = verdict.at("status").get<std::string>();
  std::cout << fmt::format("SADDLECHECK status={} stages={} failed={} m={} n={} R={:g} h={:g} report={}", status,
                           stages, verdict.at("failures").size(), cfg.at("m").get<int>(), cfg.at("n").get<int>(),
                           cfg.at("R").get<double>(), cfg.at("h").get<double>(), f.input)
            << std::endl;
  return status == "PASS" ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("saddlecheck"));
  spdlog::set_pattern("[%H:%M:%S.%e] %^%l%$ %v");

  CLI::App app{"Numerical verification toolkit for saddle solutions of the Allen-Cahn equation"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Flags f;
  struct Cmd {
    const char* name;
    const char* help;
    std::vector<std::string> stages;
    std::vector<std::string> exports;
  };
  const std::vector<Cmd> cmds = {
      {"solve", "Solve the reduced equation and dump fields as CSV", {"solve"}, {"fields"}},
      {"verify", "Run the inequality suite and the supersolution check", {"solve", "suite", "supersolution"}, {}},
      {"spectrum", "Smallest eigenvalue of the weighted linearized operator", {"solve", "spectrum"}, {}},
      {"rigor", "Interval branch-and-bound proofs of the sign claims", {"rigor"}, {}},
      {"plot", "Write sign maps (SVG and CSV) of the candidate coefficients", {"solve", "signmaps"}, {}},
      {"run", "Run an explicit list of stages", {"solve", "suite", "supersolution", "rigor"}, {}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, f, std::string(c.name) == "run");
    subs.push_back(sub);
  }
  auto* report = app.add_subcommand("report", "Summarize a saved report.json; exit status follows its verdict");
  report->add_option("input", f.input, "Path to report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cout << "SADDLECHECK status=ERROR error=usage" << std::endl;
    return code == 0 ? 0 : kUsage;
  }
  if (f.verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (report->parsed()) return show_report(f);
    for (std::size_t k = 0; k < cmds.size(); ++k)
      if (subs[k]->parsed()) return execute(f, cmds[k].stages, cmds[k].exports);
  } catch (const pl::ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    std::cout << "SADDLECHECK status=ERROR error=config" << std::endl;
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    std::cout << "SADDLECHECK status=ERROR error=runtime" << std::endl;
    return kError;
  }
  return kUsage;
}
