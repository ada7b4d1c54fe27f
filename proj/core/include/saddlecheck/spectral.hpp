#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddlecheck/candidate.hpp"
#include "saddlecheck/solver.hpp"
#include "saddlecheck/verifier.hpp"

namespace saddle::spectral {

using solver::SaddleSolution;

// Finite-volume discretization of int (|grad eta|^2 + (3u^2 - 1) eta^2) s^{m-1} t^{m-1} on the
// quadrant [0, R)^2, with eta = 0 on the outer edge. Unknowns are the nodes (i, j), 0 <= i, j < N.
struct QuadraticFormAssembly {
  int m = 0;
  int N = 0;
  double h = 0.0;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;  // diagonal of B

  int size() const { return N * N; }
  int index(int i, int j) const { return i * N + j; }
};

// Requires the full-quadrant solution field.
QuadraticFormAssembly assemble(const SaddleSolution& solution);

// eta^T K eta / eta^T B eta
double rayleigh_quotient(const QuadraticFormAssembly& a, const Eigen::VectorXd& eta);

// Node values of a field on the unknowns of the assembly.
Eigen::VectorXd restrict_field(const QuadraticFormAssembly& a, const solver::Field& f);

struct EigOptions {
  double tol = 1e-9;
  int max_iters = 2000;
  // Shift below the spectrum: the pencil is bounded below by -1.
  double shift = -1.5;
  // Block size of the subspace iteration.
  int block = 4;
  std::uint64_t seed = 20240607;
};

struct EigEstimate {
  double lambda_min = 0.0;
  // ||(K - lambda B) v|| / ||B v||
  double residual_norm = 0.0;
  int iterations = 0;
  Eigen::VectorXd vector;  // B-normalized
};

class EigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shifted inverse subspace iteration with Rayleigh-Ritz on K v = lambda B v.
// Throws EigError on factorization breakdown or non-convergence.
EigEstimate min_eigenvalue(const QuadraticFormAssembly& a, const EigOptions& options = {});

// Dense generalized eigensolver; intended for coarse grids.
double dense_min_eigenvalue(const QuadraticFormAssembly& a);

// max |v(i,j) - v(j,i)| / max |v|
double cone_symmetry_defect(const QuadraticFormAssembly& a, const Eigen::VectorXd& v);

// CSV "s,t,value" of an eigenvector.
std::string eigenvector_csv(const QuadraticFormAssembly& a, const Eigen::VectorXd& v);

// A report together with the SHA-256 of its canonical JSON.
struct SealedReport {
  verifier::CheckReport report;
  std::string sha256;
};
SealedReport seal(const verifier::CheckReport& report);

std::string solution_hash(const SaddleSolution& solution);

struct Certificate {
  bool issued = false;
  std::string reason;
  int n = 0;
  std::string conclusion;
  std::map<std::string, std::string> input_hashes;
  double max_LPhi = 0.0;
  double phi_min = 0.0;
};

// Issues the supersolution-based stability conclusion when a matching, untampered supersolution
// report passed with Phi > 0. Other reports are recorded by hash only.
Certificate stability_certificate(const SaddleSolution& solution, const candidate::CandidateParams& params,
                                  const std::vector<SealedReport>& reports);

std::string certificate_json(const Certificate& c);

}  // namespace saddle::spectral
