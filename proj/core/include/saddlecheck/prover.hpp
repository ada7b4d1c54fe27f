#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saddlecheck/expr.hpp"

namespace saddle::rigor {

using Box = std::vector<Interval>;

// Enclosure of the range of the tape on the box: natural extension intersected
// with the mean-value form. Throws GuardError when a guard cannot be certified.
Interval enclose(const Tape& tape, const Box& box);

// Upper bound of the tape on the box; coordinates along which the gradient has a
// certified sign are first fixed at the maximizing endpoint.
double upper_bound(const Tape& tape, const Box& box);

struct ProverOptions {
  double margin = 0.0;
  double min_width = 1e-4;
  int max_depth = 40;
  int threads = 1;
  // Root subdivision depth that defines independent work items.
  int split_depth = 6;
  // Hard cap on examined boxes; exceeding it leaves remaining work undecided.
  long long max_boxes = 20'000'000;
  bool record_leaves = false;
  // Boxes for which this returns true lie outside the claim region and are skipped.
  std::function<bool(const Box&)> outside;
};

enum class ProofStatus { proven, undecided };
const char* status_name(ProofStatus s);

struct LeafRecord {
  Box box;
  double upper = 0.0;
  bool accepted = false;
};

struct ProofResult {
  std::string claim_id;
  ProofStatus status = ProofStatus::undecided;
  Box root;
  long long boxes_examined = 0;
  long long boxes_pruned = 0;
  long long leaves_proven = 0;
  int max_depth_reached = 0;
  // Largest accepted upper bound: every accepted leaf satisfies upper <= worst_accepted_upper.
  double worst_accepted_upper = -INFINITY;
  double min_undecided_width = INFINITY;
  std::vector<Box> frontier;
  std::vector<LeafRecord> leaves;
  // A point at which the expression was certified positive (claim refuted there).
  std::optional<std::vector<double>> counterexample;
  double seconds = 0.0;
};

// Branch and bound for expr <= -margin on the box: bisect the widest scaled
// dimension; accept a leaf when its upper bound is < -margin; give up on a box
// when its width drops below min_width or the depth reaches max_depth.
ProofResult prove_nonpositive(const Tape& tape, const Box& box, const ProverOptions& options,
                              const std::string& claim_id = "");

// JSON trace of a proof (claim id, root box, status, counts, frontier, leaves when recorded).
std::string proof_trace_json(const ProofResult& result);

// Re-evaluates every recorded leaf; returns the number of accepted leaves whose
// bound no longer certifies the claim (0 for a valid trace).
long long replay_leaves(const Tape& tape, const ProofResult& result, double margin);

}  // namespace saddle::rigor
