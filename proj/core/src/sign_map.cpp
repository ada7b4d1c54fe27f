#include "saddlecheck/sign_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "saddlecheck/verifier.hpp"

namespace saddle::verifier {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* color(Sign s) {
  switch (s) {
    case Sign::negative: return "#2b6cb0";
    case Sign::zero: return "#f6e05e";
    case Sign::positive: return "#c53030";
    case Sign::undefined: return "#e2e8f0";
  }
  return "#000000";
}

const char* label(Sign s) {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::zero: return "zero (|v| <= tau)";
    case Sign::positive: return "positive";
    case Sign::undefined: return "undefined";
  }
  return "?";
}

int sign_code(Sign s) { return s == Sign::undefined ? 2 : static_cast<int>(s); }

}  // namespace

long long SignMap::count(Sign s) const { return std::count(signs.begin(), signs.end(), s); }

SignMap sign_map(const solver::Field& field, const solver::Grid& grid, double tau, std::string title) {
  if (field.rows() != grid.N + 1 || field.cols() != grid.N + 1)
    throw std::invalid_argument("sign_map: field does not match grid");
  SignMap m;
  m.title = std::move(title);
  m.grid = grid;
  m.tau = tau;
  m.values = field;
  m.signs.resize(static_cast<std::size_t>(grid.N + 1) * (grid.N + 1));
  for (int i = 0; i <= grid.N; ++i)
    for (int j = 0; j <= grid.N; ++j) {
      const double v = field(i, j);
      Sign s = Sign::undefined;
      if (std::isfinite(v)) s = std::abs(v) <= tau ? Sign::zero : (v < 0 ? Sign::negative : Sign::positive);
      m.signs[static_cast<std::size_t>(i) * (grid.N + 1) + j] = s;
    }
  return m;
}

std::string sign_map_csv(const SignMap& map) {
  std::string out = "s,t,value,sign\n";
  for (int i = 0; i <= map.grid.N; ++i)
    for (int j = 0; j <= map.grid.N; ++j) {
      const double v = map.values(i, j);
      out += fmt::format("{:.17g},{:.17g},{},{}\n", map.grid.coord(i), map.grid.coord(j),
                         std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string("nan"), sign_code(map.at(i, j)));
    }
  return out;
}

std::string sign_map_svg(const SignMap& map) {
  const int n = map.grid.N + 1;
  // At most 200 cells per side; each cell shows the sign of its lower-left node.
  const int stride = std::max(1, (n + 199) / 200);
  const int cells = (n + stride - 1) / stride;
  const double cell = 600.0 / cells;
  const double plot = cells * cell;
  const double left = 60, top = 40, legend_x = left + plot + 20;
  std::ostringstream os;
  os << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      legend_x + 200, top + plot + 50);
  os << fmt::format("<text x=\"{:.1f}\" y=\"24\" font-size=\"14\">{}</text>\n", left, map.title);
  for (int a = 0; a < cells; ++a)
    for (int b = 0; b < cells; ++b) {
      const Sign s = map.at(a * stride, b * stride);
      os << fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                        left + a * cell, top + plot - (b + 1) * cell, cell, cell, color(s));
    }
  os << fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"none\" stroke=\"#000\"/>\n",
                    left, top, plot, plot);
  os << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">s (0 to {:g})</text>\n",
                    left + plot / 2, top + plot + 30, map.grid.R);
  os << fmt::format(
      "<text x=\"20\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1f})\">t (0 to {:g})</text>\n",
      top + plot / 2, top + plot / 2, map.grid.R);
  int row = 0;
  for (Sign s : {Sign::negative, Sign::zero, Sign::positive, Sign::undefined}) {
    const double y = top + 20 * row++;
    os << fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"#000\"/>\n",
                      legend_x, y, color(s));
    os << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{} ({})</text>\n", legend_x + 20, y + 12, label(s), map.count(s));
  }
  os << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">tau = {:g}</text>\n", legend_x, top + 20 * row + 12, map.tau);
  os << "</svg>\n";
  return os.str();
}

std::vector<NamedField> candidate_map_fields(const solver::SaddleSolution& solution,
                                             const candidate::CandidateParams& params) {
  const int N = solution.grid.N;
  auto blank = [&] { return solver::Field::Constant(N + 1, N + 1, kNaN); };
  solver::Field ct_cs = blank(), css_gap = blank(), t_ratio = blank(), lphi_e1 = blank(), ctt = blank();
  const solver::Field L = candidate::L_phi(solution, params);
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j < i; ++j) {
      const double s = solution.s(i), t = solution.s(j);
      const candidate::CoefficientSet c = candidate::coefficients(s, t, params);
      if (t > s / 10) ct_cs(i, j) = c.C_t / c.C_s - 0.9;
      css_gap(i, j) = c.C_ss / (c.C_st - c.C_tt) - 1.0;
      ctt(i, j) = c.C_tt;
      if (candidate::region_classify(s, t) == candidate::Region::E1) {
        const double r = std::max(0.0, 1.0 - candidate::lambda_coeff(s, t, params));
        if (const auto T = candidate::T_ratio(s, t, r, params)) t_ratio(i, j) = *T - 1.0;
        if (i < N - 1) lphi_e1(i, j) = L(i, j);
      }
    }
  return {
      {"ct_over_cs", "C_t/C_s - 0.9 on s/10 < t < s", ct_cs},
      {"css_over_gap", "C_ss/(C_st - C_tt) - 1", css_gap},
      {"t_ratio_e1", "T(1 - lambda) - 1 on E1", t_ratio},
      {"lphi_e1", "L Phi0 + L Phi1 on E1", lphi_e1},
      {"e3_bound", "|L Phi0| - |2(C_s - C_t) t u_tt*| on E3", e3_margin_field(solution, params)},
      {"ctt_sign", "C_tt", ctt},
  };
}

std::vector<std::filesystem::path> write_sign_maps(const std::filesystem::path& dir,
                                                   const std::vector<NamedField>& fields, const solver::Grid& grid) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& f : fields) {
    const SignMap m = sign_map(f.field, grid, 0.0, f.title);
    for (const auto& [ext, text] : {std::pair{".svg", sign_map_svg(m)}, std::pair{".csv", sign_map_csv(m)}}) {
      const auto path = dir / (f.name + ext);
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("write_sign_maps: cannot open " + path.string());
      os << text;
      out.push_back(path);
    }
  }
  return out;
}

}  // namespace saddle::verifier
