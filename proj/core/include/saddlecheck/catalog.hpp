#pragma once

#include <string>
#include <vector>

#include "saddlecheck/expr.hpp"
#include "saddlecheck/prover.hpp"

namespace saddle::rigor {

struct CatalogEntry {
  std::string id;
  std::string description;
  Expr expr;
  std::vector<std::string> vars;
};

// Closed-form expressions for dimension n in {8, 10, 12}:
// f, h, C_s, C_st, C_ss, C_tt, C_t over (s, t); defect over (a, y~, z~);
// phi0_laplacian (drift Laplacian of Phi0 without the potential term) over (s, t).
std::vector<CatalogEntry> builtin_expressions(int n);

// Looks up an entry by id; throws std::out_of_range.
const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& id);

struct ClaimSpec {
  std::string id;
  std::string description;
  Tape tape;
  Box box;
  std::vector<std::string> vars;
  ProverOptions options;
};

// Claims of the acceptance suite:
//   defect_m4:  subsolution defect <= 0 on a in [0.01, 0.45], (y~, z~) in [0.01, 12]^2, y~ > z~ + 0.01,
//               proved over (a, z~, gap = y~ - z~).
//   C_s_neg, C_ss_neg, C_st_neg (n = 8): negative on [0.2, 20]^2 with s > t + 0.05,
//               proved over (t, gap = s - t).
std::vector<ClaimSpec> acceptance_claims();
ClaimSpec defect_claim(int m);
ClaimSpec coefficient_claim(const std::string& coeff, int n);

}  // namespace saddle::rigor
