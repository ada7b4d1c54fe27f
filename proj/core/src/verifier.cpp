#include "saddlecheck/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "saddlecheck/forms.hpp"
#include "saddlecheck/parallel.hpp"

namespace saddle::verifier {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using forms::heteroclinic;
using forms::kInvSqrt2;
using forms::kSqrt2;

// Point values available to a check.
struct Node {
  int i = 0, j = 0;
  double s = 0, t = 0, y = 0, z = 0;
  double u = 0, us = 0, ut = 0, uss = 0, ust = 0, utt = 0, uy = 0, uz = 0;
  // u_s on the cone at the same y (interpolated between cone nodes when i + j is odd)
  double us_cone = 0;
  double rho_z = kNaN;
  double d = 0;
};

struct Eval {
  double margin;
  double scale;
};

enum class Domain { interior, cone };

struct CheckDef {
  std::string id;
  std::string statement;
  std::function<Eval(const Node&)> eval;
  Domain domain = Domain::interior;
  bool informational = false;
  bool needs_rho = false;
  std::function<bool(const Node&)> extra_region;
};

double sq(double x) { return x * x; }

std::vector<CheckDef> catalog() {
  std::vector<CheckDef> c;
  auto add = [&](std::string id, std::string statement, std::function<Eval(const Node&)> fn) {
    CheckDef def;
    def.id = std::move(id);
    def.statement = std::move(statement);
    def.eval = std::move(fn);
    c.push_back(std::move(def));
    return &c.back();
  };
  add("1", "1/2 (u_s^2 + u_t^2) <= F(u)", [](const Node& n) {
    const double F = forms::double_well(n.u), g = 0.5 * (sq(n.us) + sq(n.ut));
    return Eval{F - g, F + g};
  });
  add("2", "t u_s + s u_t <= 0", [](const Node& n) {
    return Eval{-(n.t * n.us + n.s * n.ut), n.t * std::abs(n.us) + n.s * std::abs(n.ut)};
  });
  add("3a", "u_s + u_t >= 0", [](const Node& n) { return Eval{n.us + n.ut, std::abs(n.us) + std::abs(n.ut)}; });
  add("3b", "u_s + u_t <= z/(y+z) u_s", [](const Node& n) {
    return Eval{n.z / (n.y + n.z) * n.us - (n.us + n.ut), 2 * std::abs(n.us) + std::abs(n.ut)};
  });
  add("3c", "u_s + u_t <= 2z/(y+z) u_s", [](const Node& n) {
    return Eval{2 * n.z / (n.y + n.z) * n.us - (n.us + n.ut), 2 * std::abs(n.us) + std::abs(n.ut)};
  })->informational = true;
  add("4", "u_s <= 2(e^{0.85t} + 4.9/sqrt(t)) e^{-0.85s}", [](const Node& n) {
    const double b = 2 * (std::exp(0.85 * n.t) + 4.9 / std::sqrt(n.t)) * std::exp(-0.85 * n.s);
    return Eval{b - n.us, b + std::abs(n.us)};
  });
  add("5", "u_s/s - u_ss >= 0", [](const Node& n) {
    return Eval{n.us / n.s - n.uss, std::abs(n.us / n.s) + std::abs(n.uss)};
  });
  add("6", "u_s/s + u_t/t - u_ss - u_tt >= 0", [](const Node& n) {
    return Eval{n.us / n.s + n.ut / n.t - n.uss - n.utt,
                std::abs(n.us / n.s) + std::abs(n.ut / n.t) + std::abs(n.uss) + std::abs(n.utt)};
  });
  auto bound7 = [](const Node& n) {
    const double w = n.us - n.ut;
    return (1 / sq(n.t) - 1 / sq(n.s)) * (2 * w + std::sqrt(std::abs(w)));
  };
  add("7", "u_s + u_t <= (1/t^2 - 1/s^2)(2(u_s - u_t) + sqrt(u_s - u_t))", [bound7](const Node& n) {
    const double b = bound7(n);
    return Eval{b - (n.us + n.ut), std::abs(b) + std::abs(n.us) + std::abs(n.ut)};
  });
  add("8", "u - u^3 + u_ss >= 0", [](const Node& n) {
    const double p = n.u - n.u * n.u * n.u;
    return Eval{p + n.uss, std::abs(p) + std::abs(n.uss)};
  });
  add("9", "sqrt2 u_s u + u_ss >= 0", [](const Node& n) {
    return Eval{kSqrt2 * n.us * n.u + n.uss, std::abs(kSqrt2 * n.us * n.u) + std::abs(n.uss)};
  });
  add("10", "sqrt2 u_t u + u_st <= 0", [](const Node& n) {
    return Eval{-(kSqrt2 * n.ut * n.u + n.ust), std::abs(kSqrt2 * n.ut * n.u) + std::abs(n.ust)};
  });
  add("11", "2(u_s + u_t) + u_st + u_ss >= 0", [](const Node& n) {
    return Eval{2 * (n.us + n.ut) + n.ust + n.uss, 2 * std::abs(n.us + n.ut) + std::abs(n.ust) + std::abs(n.uss)};
  });
  add("12", "2(u_s + u_t) - u_st - u_tt >= 0", [](const Node& n) {
    return Eval{2 * (n.us + n.ut) - n.ust - n.utt, 2 * std::abs(n.us + n.ut) + std::abs(n.ust) + std::abs(n.utt)};
  });
  add("13a", "u/y + u/z - u_y - u_z >= 0", [](const Node& n) {
    return Eval{n.u / n.y + n.u / n.z - n.uy - n.uz,
                std::abs(n.u / n.y) + std::abs(n.u / n.z) + std::abs(n.uy) + std::abs(n.uz)};
  });
  add("13b", "u >= y u_y", [](const Node& n) { return Eval{n.u - n.y * n.uy, std::abs(n.u) + std::abs(n.y * n.uy)}; });
  add("14", "u_z - y u_yz >= 0 on the cone", [](const Node& n) {
    const double uz = (n.us - n.ut) * kInvSqrt2, uyz = 0.5 * (n.uss - n.utt);
    return Eval{uz - n.y * uyz, std::abs(uz) + std::abs(n.y * uyz)};
  })->domain = Domain::cone;
  add("15", "-u_t/t + u_st + u_tt >= 0", [](const Node& n) {
    return Eval{-n.ut / n.t + n.ust + n.utt, std::abs(n.ut / n.t) + std::abs(n.ust) + std::abs(n.utt)};
  });
  add("16", "(m-1)(1/t - 1/s) u_s + u_ss + 2 u_st >= 0", [](const Node& n) {
    const double a = n.d * (1 / n.t - 1 / n.s) * n.us;
    return Eval{a + n.uss + 2 * n.ust, std::abs(a) + std::abs(n.uss) + 2 * std::abs(n.ust)};
  });
  add("17", "(m-1)(1/t - 1/s)(u_s - u_t) + 2 u_st + u_ss + u_tt >= 0", [](const Node& n) {
    const double a = n.d * (1 / n.t - 1 / n.s) * (n.us - n.ut);
    return Eval{a + 2 * n.ust + n.uss + n.utt,
                std::abs(a) + 2 * std::abs(n.ust) + std::abs(n.uss) + std::abs(n.utt)};
  });
  add("18", "u_st + u_ss + (1/t^2 - 1/s^2)(2(u_s - u_t) + sqrt(u_s - u_t)) >= 0", [bound7](const Node& n) {
    const double b = bound7(n);
    return Eval{n.ust + n.uss + b, std::abs(n.ust) + std::abs(n.uss) + std::abs(b)};
  });
  add("19", "u_s u + u_ss >= 0", [](const Node& n) {
    return Eval{n.us * n.u + n.uss, std::abs(n.us * n.u) + std::abs(n.uss)};
  });
  add("20", "-u_t u - u_st >= 0", [](const Node& n) {
    return Eval{-n.ut * n.u - n.ust, std::abs(n.ut * n.u) + std::abs(n.ust)};
  });
  add("21", "((m-1)/2)(1/t - 1/s) u_s + u_ss + u_st >= 0", [](const Node& n) {
    const double a = 0.5 * n.d * (1 / n.t - 1 / n.s) * n.us;
    return Eval{a + n.uss + n.ust, std::abs(a) + std::abs(n.uss) + std::abs(n.ust)};
  });
  add("22", "((m-1)/2)(1/s - 1/t) u_t - u_st - u_tt >= 0", [](const Node& n) {
    const double a = 0.5 * n.d * (1 / n.s - 1 / n.t) * n.ut;
    return Eval{a - n.ust - n.utt, std::abs(a) + std::abs(n.ust) + std::abs(n.utt)};
  });
  add("23", "u_s + u_t - u_st - u_tt >= 0", [](const Node& n) {
    return Eval{n.us + n.ut - n.ust - n.utt, std::abs(n.us) + std::abs(n.ut) + std::abs(n.ust) + std::abs(n.utt)};
  });
  add("24", "u_s + u_t + u_st + u_ss >= 0", [](const Node& n) {
    return Eval{n.us + n.ut + n.ust + n.uss, std::abs(n.us) + std::abs(n.ut) + std::abs(n.ust) + std::abs(n.uss)};
  });
  auto bound25 = [](const Node& n) {
    const double w = n.us - n.ut;
    return (1 / sq(n.t) - 1 / sq(n.s)) * (w + 0.5 * std::sqrt(std::abs(w)));
  };
  add("25a", "u_s + u_t <= (1/t^2 - 1/s^2)(u_s - u_t + sqrt(u_s - u_t)/2)", [bound25](const Node& n) {
    const double b = bound25(n);
    return Eval{b - (n.us + n.ut), std::abs(b) + std::abs(n.us) + std::abs(n.ut)};
  });
  add("25b", "u_st + u_ss + (1/t^2 - 1/s^2)(u_s - u_t + sqrt(u_s - u_t)/2) >= 0", [bound25](const Node& n) {
    const double b = bound25(n);
    return Eval{b + n.ust + n.uss, std::abs(b) + std::abs(n.ust) + std::abs(n.uss)};
  });
  add("26a", "u u_s - u u_t + u_ss - u_st >= 0 (d/dz of u^2 + 2u_s)", [](const Node& n) {
    return Eval{n.u * n.us - n.u * n.ut + n.uss - n.ust,
                std::abs(n.u * n.us) + std::abs(n.u * n.ut) + std::abs(n.uss) + std::abs(n.ust)};
  });
  add("26b", "2u_s(y,z) >= 2u_s(y,0) - (H(y)H(z))^2", [](const Node& n) {
    const double hh2 = sq(heteroclinic(n.y) * heteroclinic(n.z));
    return Eval{2 * n.us - 2 * n.us_cone + hh2, 2 * std::abs(n.us) + 2 * std::abs(n.us_cone) + hh2};
  });
  // Placeholder evaluated from checks 19 and 20 after the sweep.
  add("26-implied", "margin(26a) >= -(deficit(19) + deficit(20))", nullptr);
  add("27a", "H(y)H(z) - u <= 4H(y)(H(z) + zH'(z))/(y^2 - z^2)", [](const Node& n) {
    const double hy = heteroclinic(n.y), hz = heteroclinic(n.z);
    const double phi = hy * hz - n.u;
    const double b = 4 * hy * (hz + n.z * heteroclinic(n.z, 1)) / (sq(n.y) - sq(n.z));
    return Eval{b - phi, std::abs(b) + std::abs(phi)};
  });
  auto z_above_one = [](const Node& n) { return n.z > 1.0; };
  {
    auto* def = add("27b", "H(y)H(z) - u <= (5/4)(1/t - 1/s)H(y)rho(z) for z > 1", [](const Node& n) {
      const double hy = heteroclinic(n.y);
      const double phi = hy * heteroclinic(n.z) - n.u;
      const double b = 1.25 * (1 / n.t - 1 / n.s) * hy * n.rho_z;
      return Eval{b - phi, std::abs(b) + std::abs(phi)};
    });
    def->needs_rho = true;
    def->extra_region = z_above_one;
  }
  {
    // margin = 5/4 - phi / ((1/t - 1/s)H(y)rho(z)); its minimum gives the smallest admissible constant.
    auto* def = add("27b-minimal", "smallest c with H(y)H(z) - u <= c(1/t - 1/s)H(y)rho(z) for z > 1",
                    [](const Node& n) {
                      const double hy = heteroclinic(n.y);
                      const double phi = hy * heteroclinic(n.z) - n.u;
                      const double base = (1 / n.t - 1 / n.s) * hy * n.rho_z;
                      return Eval{1.25 - phi / base, 0.0};
                    });
    def->needs_rho = true;
    def->informational = true;
    def->extra_region = z_above_one;
  }
  add("28", "u >= H(0.45y)H(0.45z)", [](const Node& n) {
    const double b = heteroclinic(0.45 * n.y) * heteroclinic(0.45 * n.z);
    return Eval{n.u - b, std::abs(n.u) + b};
  });
  add("29", "u_ss + u_tt + (m-1)u_s/s + (m-1)u_t/t >= -u(2u_s(y,z) + 1 - 2u_s(y,0))", [](const Node& n) {
    const double lhs = n.uss + n.utt + n.d / n.s * n.us + n.d / n.t * n.ut;
    const double rhs = n.u * (2 * n.us + 1 - 2 * n.us_cone);
    return Eval{lhs + rhs, std::abs(n.uss) + std::abs(n.utt) + std::abs(n.d / n.s * n.us) +
                               std::abs(n.d / n.t * n.ut) +
                               std::abs(n.u) * (2 * std::abs(n.us) + 1 + 2 * std::abs(n.us_cone))};
  });
  return c;
}

const std::vector<CheckDef>& checks() {
  static const std::vector<CheckDef> c = catalog();
  return c;
}

const CheckDef& find_def(const std::string& id) {
  for (const auto& d : checks())
    if (d.id == id) return d;
  throw std::out_of_range("verifier: unknown check " + id);
}

void require_derivatives(const SaddleSolution& sol) {
  if (!sol.has_derivatives) throw std::invalid_argument("verifier: solution has no derivative fields");
}

Node make_node(const SaddleSolution& sol, int i, int j, const std::vector<double>* rho_table) {
  Node n;
  n.i = i;
  n.j = j;
  n.s = sol.s(i);
  n.t = sol.s(j);
  n.y = (n.s + n.t) * kInvSqrt2;
  n.z = (n.s - n.t) * kInvSqrt2;
  n.u = sol.u(i, j);
  n.us = sol.u_s(i, j);
  n.ut = sol.u_t(i, j);
  n.uss = sol.u_ss(i, j);
  n.ust = sol.u_st(i, j);
  n.utt = sol.u_tt(i, j);
  n.uy = sol.u_y(i, j);
  n.uz = sol.u_z(i, j);
  n.d = sol.params.drift;
  const int k = (i + j) / 2;
  if ((i + j) % 2 == 0) {
    n.us_cone = sol.u_s(k, k);
  } else {
    const int k1 = std::min(k + 1, sol.grid.N);
    n.us_cone = 0.5 * (sol.u_s(k, k) + sol.u_s(k1, k1));
  }
  if (rho_table) n.rho_z = (*rho_table)[i - j];
  return n;
}

std::vector<double> rho_table(const SaddleSolution& sol) {
  std::vector<double> r(sol.grid.N + 1, kNaN);
  for (int k = 0; k <= sol.grid.N; ++k) {
    const double z = sol.s(k) * kInvSqrt2;
    if (z > 1.0) r[k] = forms::rho(z);
  }
  return r;
}

bool interior_node(const SaddleSolution& sol, int i, int j, const SuiteOptions& o) {
  return i - j >= o.exclusion && j >= o.exclusion && i < sol.grid.N - 1 && sol.s(i) <= sol.grid.R - o.far_field + 1e-9;
}

bool cone_node(const SaddleSolution& sol, int i, int j, const SuiteOptions& o) {
  return i == j && i >= o.exclusion && i < sol.grid.N - 1 && sol.s(i) <= sol.grid.R - o.far_field + 1e-9;
}

// Running worst over nodes: minimizes margin + tolerance, ties broken by traversal order.
struct Tracker {
  CheckReport r;
  double best_slack = INFINITY;
  bool any = false;

  void visit(double margin, double tol, double s, double t) {
    ++r.nodes_checked;
    if (!any || margin < r.raw_min_margin) r.raw_min_margin = margin;
    const double slack = margin + tol;
    if (!any || slack < best_slack) {
      best_slack = slack;
      r.worst_margin = margin;
      r.tolerance_used = tol;
      r.worst_s = s;
      r.worst_t = t;
    }
    any = true;
  }

  CheckReport finish(long long total_nodes) {
    r.nodes_excluded = total_nodes - r.nodes_checked;
    if (!any) {
      r.worst_margin = kNaN;
      r.raw_min_margin = kNaN;
      r.pass = false;
      r.note = "no nodes checked";
      return r;
    }
    r.pass = r.worst_margin >= -r.tolerance_used;
    return r;
  }
};

long long triangle_nodes(const SaddleSolution& sol) { return sol.grid.triangle_node_count(); }

CheckReport run_check(const SaddleSolution& sol, const CheckDef& def, const SuiteOptions& o,
                      const std::vector<double>* rho) {
  Tracker tr;
  tr.r.id = def.id;
  tr.r.statement = def.statement;
  tr.r.informational = def.informational;
  const double h2 = sol.grid.h * sol.grid.h;
  const double kappa = def.domain == Domain::cone ? o.kappa_axis : o.kappa;
  for (int i = 0; i <= sol.grid.N; ++i)
    for (int j = 0; j <= i; ++j) {
      const bool in = def.domain == Domain::cone ? cone_node(sol, i, j, o) : interior_node(sol, i, j, o);
      if (!in) continue;
      const Node n = make_node(sol, i, j, def.needs_rho ? rho : nullptr);
      if (def.extra_region && !def.extra_region(n)) continue;
      const Eval e = def.eval(n);
      if (!std::isfinite(e.margin)) continue;
      tr.visit(e.margin, kappa * h2 * e.scale, n.s, n.t);
    }
  CheckReport r = tr.finish(triangle_nodes(sol));
  if (def.id == "27b-minimal" && std::isfinite(r.raw_min_margin)) {
    r.extras["min_constant"] = 1.25 - r.raw_min_margin;
    r.note = "smallest constant replacing 5/4 on the grid";
  }
  return r;
}

CheckReport implication_26(const SaddleSolution& sol, const CheckDef& def, const SuiteOptions& o) {
  const CheckDef& d19 = find_def("19");
  const CheckDef& d20 = find_def("20");
  const CheckDef& d26 = find_def("26a");
  Tracker tr;
  tr.r.id = def.id;
  tr.r.statement = def.statement;
  tr.r.informational = def.informational;
  for (int i = 0; i <= sol.grid.N; ++i)
    for (int j = 0; j <= i; ++j) {
      if (!interior_node(sol, i, j, o)) continue;
      const Node n = make_node(sol, i, j, nullptr);
      const Eval a = d19.eval(n), b = d20.eval(n), c = d26.eval(n);
      const double deficit = std::max(0.0, -a.margin) + std::max(0.0, -b.margin);
      tr.visit(c.margin + deficit, 1e-12 * c.scale, n.s, n.t);
    }
  return tr.finish(triangle_nodes(sol));
}

nlohmann::json to_json(const CheckReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [k, v] : r.extras) extras[k] = num(v);
  return {{"id", r.id},
          {"statement", r.statement},
          {"informational", r.informational},
          {"pass", r.pass},
          {"worst_margin", num(r.worst_margin)},
          {"worst_point", {r.worst_s, r.worst_t}},
          {"tolerance_used", num(r.tolerance_used)},
          {"raw_min_margin", num(r.raw_min_margin)},
          {"nodes_checked", r.nodes_checked},
          {"nodes_excluded", r.nodes_excluded},
          {"extras", extras},
          {"note", r.note}};
}

}  // namespace

std::vector<std::string> suite_check_ids() {
  std::vector<std::string> ids;
  for (const auto& d : checks()) ids.push_back(d.id);
  return ids;
}

std::vector<CheckReport> run_inequality_suite(const SaddleSolution& solution, const SuiteOptions& options) {
  require_derivatives(solution);
  const auto& defs = checks();
  const std::vector<double> rho = rho_table(solution);
  std::vector<CheckReport> out(defs.size());
  parallel_for(defs.size(), options.threads, [&](std::size_t k) {
    out[k] = defs[k].eval ? run_check(solution, defs[k], options, &rho) : implication_26(solution, defs[k], options);
  });
  return out;
}

bool suite_passes(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.informational || r.pass; });
}

Field check_margin_field(const SaddleSolution& solution, const std::string& id, const SuiteOptions& options,
                         Field* scale) {
  require_derivatives(solution);
  const CheckDef& def = find_def(id);
  if (!def.eval) throw std::invalid_argument("check_margin_field: check " + id + " is not node-wise");
  const int N = solution.grid.N;
  std::vector<double> rho;
  if (def.needs_rho) rho = rho_table(solution);
  Field out = Field::Constant(N + 1, N + 1, kNaN);
  if (scale) *scale = Field::Constant(N + 1, N + 1, kNaN);
  const double h2 = solution.grid.h * solution.grid.h;
  const double kappa = def.domain == Domain::cone ? options.kappa_axis : options.kappa;
  for (int i = 1; i < N - 1; ++i)
    for (int j = 1; j <= i; ++j) {
      const Node n = make_node(solution, i, j, def.needs_rho ? &rho : nullptr);
      if (def.extra_region && !def.extra_region(n)) continue;
      const Eval e = def.eval(n);
      out(i, j) = e.margin;
      if (scale) (*scale)(i, j) = kappa * h2 * e.scale;
    }
  return out;
}

std::vector<double> cone_band_profile(const SaddleSolution& solution, const std::string& id, int bands,
                                      const SuiteOptions& options) {
  const Field m = check_margin_field(solution, id, options);
  std::vector<double> out;
  for (int b = 0; b < bands; ++b) {
    const int k = options.exclusion + b;
    double worst = INFINITY;
    for (int j = options.exclusion; j + k < solution.grid.N - 1; ++j) {
      const int i = j + k;
      if (solution.s(i) > solution.grid.R - options.far_field + 1e-9) break;
      if (std::isfinite(m(i, j))) worst = std::min(worst, m(i, j));
    }
    out.push_back(worst);
  }
  return out;
}

CheckReport verify_supersolution(const SaddleSolution& solution, const candidate::CandidateParams& params,
                                 const SupersolutionOptions& options) {
  require_derivatives(solution);
  const Field L = candidate::L_phi(solution, params);
  const Field phi = candidate::phi_field(solution, params);
  Tracker tr;
  tr.r.id = "supersolution_n" + std::to_string(params.n);
  tr.r.statement = params.include_phi0 ? "L Phi <= 0 and Phi > 0" : "L Phi <= 0 and Phi > 0 (without Phi0)";
  double phi_min = INFINITY, max_L = -INFINITY;
  std::map<std::string, double> region_worst = {{"E1", INFINITY}, {"E2", INFINITY}, {"E3", INFINITY}};
  const int N = solution.grid.N;
  for (int i = 0; i < N - 1; ++i)
    for (int j = options.exclusion; j <= i; ++j) {
      const double s = solution.s(i), t = solution.s(j);
      if (s > solution.grid.R - options.far_field + 1e-9) continue;
      const double l = L(i, j);
      if (!std::isfinite(l)) continue;
      tr.visit(-l, options.tolerance, s, t);
      max_L = std::max(max_L, l);
      phi_min = std::min(phi_min, phi(i, j));
      double& rw = region_worst[candidate::region_name(candidate::region_classify(s, t))];
      rw = std::min(rw, -l);
    }
  CheckReport r = tr.finish(triangle_nodes(solution));
  for (const auto& [k, v] : region_worst) r.extras[k] = v;
  r.extras["phi_min"] = phi_min;
  r.extras["max_LPhi"] = max_L;
  if (!(phi_min > options.phi_floor)) {
    r.pass = false;
    r.note = "Phi not positive at some checked node";
  }
  return r;
}

Field e3_margin_field(const SaddleSolution& solution, const candidate::CandidateParams& params) {
  require_derivatives(solution);
  if (solution.params.n != params.n) throw std::invalid_argument("e3_margin_field: dimension mismatch");
  const int N = solution.grid.N;
  Field out = Field::Constant(N + 1, N + 1, kNaN);
  for (int i = 1; i < N - 1; ++i) {
    double utt_star = INFINITY;
    for (int j = 1; j < i; ++j) {
      const double s = solution.s(i), t = solution.s(j);
      if (t > 0.5) break;
      utt_star = std::min(utt_star, solution.u_tt(i, j));
      const candidate::CoefficientSet c = candidate::coefficients(s, t, params);
      const double lphi0 = candidate::L_phi0(s, t, solution.u(i, j), params);
      out(i, j) = std::abs(lphi0) - std::abs(2 * (c.C_s - c.C_t) * t * utt_star);
    }
  }
  return out;
}

CheckReport e3_diagnostic(const SaddleSolution& solution, const candidate::CandidateParams& params,
                          const SupersolutionOptions& options) {
  const Field f = e3_margin_field(solution, params);
  Tracker tr;
  tr.r.id = "e3_bound_n" + std::to_string(params.n);
  tr.r.statement = "|2(C_s - C_t) t u_tt*| < |L Phi0| for t <= 1/2";
  tr.r.informational = true;
  const int N = solution.grid.N;
  for (int i = 0; i <= N; ++i)
    for (int j = options.exclusion; j <= i; ++j) {
      if (solution.s(i) > solution.grid.R - options.far_field + 1e-9) continue;
      if (std::isfinite(f(i, j))) tr.visit(f(i, j), 0.0, solution.s(i), solution.s(j));
    }
  CheckReport r = tr.finish(triangle_nodes(solution));
  long long bad = 0;
  double largest_bad_s = -INFINITY;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::isfinite(f(i, j)) && f(i, j) < 0) {
        ++bad;
        largest_bad_s = std::max(largest_bad_s, solution.s(i));
      }
  r.extras["violations"] = static_cast<double>(bad);
  r.extras["largest_violating_s"] = largest_bad_s;
  return r;
}

CheckReport t_ratio_diagnostic(const solver::Grid& grid, const candidate::CandidateParams& params) {
  Tracker tr;
  tr.r.id = "t_ratio_n" + std::to_string(params.n);
  tr.r.statement = "0 < T(r) < 1 on E1 for r in [max(0, 1 - lambda), 1)";
  tr.r.informational = true;
  double max_T = -INFINITY, smallest_bad_s = INFINITY;
  long long undefined = 0, bad = 0;
  for (int i = 1; i <= grid.N; ++i)
    for (int j = 1; j < i; ++j) {
      const double s = grid.coord(i), t = grid.coord(j);
      if (candidate::region_classify(s, t) != candidate::Region::E1) continue;
      const double r0 = std::max(0.0, 1.0 - candidate::lambda_coeff(s, t, params));
      if (r0 >= 1.0 - 1e-3) continue;
      double worst = INFINITY;
      for (int k = 0; k <= 8; ++k) {
        const double r = r0 + (1.0 - 1e-3 - r0) * k / 8.0;
        const auto T = candidate::T_ratio(s, t, r, params);
        if (!T) {
          ++undefined;
          worst = -INFINITY;
          continue;
        }
        max_T = std::max(max_T, *T);
        worst = std::min(worst, std::min(*T, 1.0 - *T));
      }
      if (!(worst > 0)) {
        ++bad;
        smallest_bad_s = std::min(smallest_bad_s, s);
      }
      tr.visit(std::isfinite(worst) ? worst : -1.0, 0.0, s, t);
    }
  CheckReport r = tr.finish(static_cast<long long>(grid.triangle_node_count()));
  r.extras["max_T"] = max_T;
  r.extras["violations"] = static_cast<double>(bad);
  r.extras["undefined"] = static_cast<double>(undefined);
  r.extras["smallest_violating_s"] = smallest_bad_s;
  return r;
}

std::string report_json(const CheckReport& report) { return to_json(report).dump(1); }

std::string reports_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  nlohmann::json j = {{"schema_version", kReportSchemaVersion}, {"reports", arr}};
  return j.dump(1);
}

}  // namespace saddle::verifier
