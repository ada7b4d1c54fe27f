#include "saddlecheck/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "json.hpp"
#include "saddlecheck/hash.hpp"

namespace saddle::spectral {

namespace {

// int_a^b x^d dx
double power_integral(double a, double b, int d) { return (std::pow(b, d + 1) - std::pow(a, d + 1)) / (d + 1); }

Eigen::MatrixXd b_normalize(const QuadraticFormAssembly& a, Eigen::MatrixXd x) {
  for (int c = 0; c < x.cols(); ++c) {
    const double nb = std::sqrt(x.col(c).dot(a.mass.cwiseProduct(x.col(c))));
    x.col(c) /= nb;
    // Sign convention: largest-magnitude entry positive.
    Eigen::Index k;
    x.col(c).cwiseAbs().maxCoeff(&k);
    if (x(k, c) < 0) x.col(c) = -x.col(c);
  }
  return x;
}

}  // namespace

QuadraticFormAssembly assemble(const SaddleSolution& solution) {
  const int N = solution.grid.N;
  if (solution.u.rows() != N + 1 || solution.u.cols() != N + 1)
    throw std::invalid_argument("assemble: solution field does not cover the quadrant");
  QuadraticFormAssembly a;
  a.m = solution.params.m;
  a.N = N;
  a.h = solution.grid.h;
  const int d = a.m - 1;
  const double h = a.h;
  // Weight integrals over dual cells (node j) and over primal edges [j h, (j+1) h].
  std::vector<double> cell(N), edge(N);
  for (int j = 0; j < N; ++j) {
    cell[j] = power_integral(std::max(j - 0.5, 0.0) * h, (j + 0.5) * h, d);
    edge[j] = power_integral(j * h, (j + 1) * h, d);
  }
  const int n = a.size();
  a.mass.resize(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5) * n);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const int p = a.index(i, j);
      a.mass[p] = cell[i] * cell[j];
      const double u = solution.u(i, j);
      diag[p] += (3.0 * u * u - 1.0) * a.mass[p];
    }
  auto couple = [&](int p, int q, double c) {
    diag[p] += c;
    if (q < 0) return;
    diag[q] += c;
    trip.emplace_back(p, q, -c);
    trip.emplace_back(q, p, -c);
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double c = edge[i] * cell[j] / (h * h);
      couple(a.index(i, j), i + 1 < N ? a.index(i + 1, j) : -1, c);  // s-edge
      couple(a.index(j, i), i + 1 < N ? a.index(j, i + 1) : -1, c);  // t-edge
    }
  for (int p = 0; p < n; ++p) trip.emplace_back(p, p, diag[p]);
  a.stiffness.resize(n, n);
  a.stiffness.setFromTriplets(trip.begin(), trip.end());
  return a;
}

double rayleigh_quotient(const QuadraticFormAssembly& a, const Eigen::VectorXd& eta) {
  return eta.dot(a.stiffness * eta) / eta.dot(a.mass.cwiseProduct(eta));
}

Eigen::VectorXd restrict_field(const QuadraticFormAssembly& a, const solver::Field& f) {
  Eigen::VectorXd v(a.size());
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j < a.N; ++j) v[a.index(i, j)] = f(i, j);
  return v;
}

EigEstimate min_eigenvalue(const QuadraticFormAssembly& a, const EigOptions& options) {
  const int n = a.size();
  const int p = std::clamp(options.block, 1, n);
  const Eigen::SparseMatrix<double> shifted =
      a.stiffness - options.shift * Eigen::SparseMatrix<double>(a.mass.asDiagonal());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw EigError("min_eigenvalue: factorization of K - shift B failed");
  if ((solver.vectorD().array() <= 0).any())
    throw EigError("min_eigenvalue: shift is not below the spectrum");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < n; ++r) x(r, c) = unit(rng);
  x = b_normalize(a, x);

  EigEstimate est;
  for (int it = 1; it <= options.max_iters; ++it) {
    const Eigen::MatrixXd y = solver.solve(a.mass.asDiagonal() * x);
    if (solver.info() != Eigen::Success) throw EigError("min_eigenvalue: linear solve failed");
    const Eigen::MatrixXd ky = a.stiffness * y;
    const Eigen::MatrixXd kr = y.transpose() * ky;
    const Eigen::MatrixXd br = y.transpose() * a.mass.asDiagonal() * y;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (kr + kr.transpose()),
                                                                   0.5 * (br + br.transpose()));
    if (ritz.info() != Eigen::Success) throw EigError("min_eigenvalue: Rayleigh-Ritz step failed");
    x = b_normalize(a, y * ritz.eigenvectors());
    const Eigen::VectorXd v = x.col(0);
    const Eigen::VectorXd bv = a.mass.cwiseProduct(v);
    const double lambda = rayleigh_quotient(a, v);
    const double res = (a.stiffness * v - lambda * bv).norm() / bv.norm();
    est.lambda_min = lambda;
    est.residual_norm = res;
    est.iterations = it;
    if (res <= options.tol) {
      est.vector = v;
      return est;
    }
  }
  throw EigError(fmt::format("min_eigenvalue: no convergence after {} iterations (residual {:.3e}, lambda {:.6g})",
                             options.max_iters, est.residual_norm, est.lambda_min));
}

double dense_min_eigenvalue(const QuadraticFormAssembly& a) {
  const Eigen::VectorXd inv_sqrt = a.mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd c = Eigen::MatrixXd(a.stiffness);
  c = inv_sqrt.asDiagonal() * c * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigError("dense_min_eigenvalue: eigensolver failed");
  return es.eigenvalues()[0];
}

double cone_symmetry_defect(const QuadraticFormAssembly& a, const Eigen::VectorXd& v) {
  double defect = 0.0;
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j < i; ++j) defect = std::max(defect, std::abs(v[a.index(i, j)] - v[a.index(j, i)]));
  return defect / v.cwiseAbs().maxCoeff();
}

std::string eigenvector_csv(const QuadraticFormAssembly& a, const Eigen::VectorXd& v) {
  std::string out = "s,t,value\n";
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j < a.N; ++j)
      out += fmt::format("{:.17g},{:.17g},{:.17g}\n", i * a.h, j * a.h, v[a.index(i, j)]);
  return out;
}

SealedReport seal(const verifier::CheckReport& report) { return {report, sha256_hex(verifier::report_json(report))}; }

std::string solution_hash(const SaddleSolution& solution) {
  const std::string header = fmt::format("m={} R={:.17g} h={:.17g} N={}", solution.params.m, solution.grid.R,
                                         solution.grid.h, solution.grid.N);
  const std::string payload(reinterpret_cast<const char*>(solution.u.data()),
                            static_cast<std::size_t>(solution.u.size()) * sizeof(double));
  return sha256_hex(header + "\n" + payload);
}

Certificate stability_certificate(const SaddleSolution& solution, const candidate::CandidateParams& params,
                                  const std::vector<SealedReport>& reports) {
  Certificate c;
  c.n = params.n;
  c.input_hashes["solution"] = solution_hash(solution);
  c.input_hashes["candidate"] =
      sha256_hex(fmt::format("n={} exponent={:.17g} c0={:.17g} a0={:.17g} exp_term={} phi0={}", params.n,
                             params.decay_exponent, params.phi0_coeff, params.phi0_exponent, params.has_exp_term,
                             params.include_phi0));
  auto refuse = [&](std::string why) {
    c.issued = false;
    c.reason = std::move(why);
    return c;
  };
  if (solution.params.n != params.n) return refuse("solution dimension does not match the candidate");
  const std::string wanted = "supersolution_n" + std::to_string(params.n);
  const SealedReport* super = nullptr;
  for (const auto& r : reports) {
    if (sha256_hex(verifier::report_json(r.report)) != r.sha256) return refuse("report " + r.report.id + " hash mismatch");
    c.input_hashes["report:" + r.report.id] = r.sha256;
    if (r.report.id == wanted) super = &r;
  }
  if (!super) return refuse("no supersolution report for n=" + std::to_string(params.n));
  const auto& rep = super->report;
  c.max_LPhi = rep.extras.count("max_LPhi") ? rep.extras.at("max_LPhi") : NAN;
  c.phi_min = rep.extras.count("phi_min") ? rep.extras.at("phi_min") : NAN;
  if (!rep.pass) return refuse("supersolution report failed: max L Phi " + fmt::format("{:.3e}", c.max_LPhi));
  if (!(c.phi_min > 0.0)) return refuse("Phi is not positive at every checked node");
  c.issued = true;
  c.conclusion = fmt::format(
      "Phi > 0 with L Phi <= {:.1e} on the checked grid (n={}, R={:g}, h={:g}); a positive supersolution of the "
      "linearized operator implies stability of the saddle solution",
      rep.tolerance_used, params.n, solution.grid.R, solution.grid.h);
  return c;
}

std::string certificate_json(const Certificate& c) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"schema_version", 1},
                      {"issued", c.issued},
                      {"reason", c.reason},
                      {"n", c.n},
                      {"conclusion", c.conclusion},
                      {"max_LPhi", num(c.max_LPhi)},
                      {"phi_min", num(c.phi_min)},
                      {"input_hashes", c.input_hashes}};
  return j.dump(1);
}

}  // namespace saddle::spectral
