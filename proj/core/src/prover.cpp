#include "saddlecheck/prover.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "saddlecheck/parallel.hpp"

namespace saddle::rigor {

namespace {

Interval mean_value(const Tape& tape, const Box& box, const DualInterval& d) {
  std::vector<Interval> mid(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) mid[i] = Interval(box[i].mid());
  Interval r = tape.eval(mid.data());
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i].is_point()) continue;
    r = r + d.g[i] * (box[i] - mid[i]);
  }
  return r;
}

Interval enclose_with(const Tape& tape, const Box& box, const DualInterval& d) {
  const Interval mv = mean_value(tape, box, d);
  return intersect(d.v, mv);
}

std::size_t widest_scaled(const Box& box, const std::vector<double>& scale) {
  std::size_t best = 0;
  double best_w = -1.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double w = box[i].width() / scale[i];
    if (w > best_w) {
      best_w = w;
      best = i;
    }
  }
  return best;
}

std::pair<Box, Box> bisect(const Box& box, std::size_t dim) {
  Box lo = box, hi = box;
  const double m = box[dim].mid();
  lo[dim] = Interval(box[dim].lo, m);
  hi[dim] = Interval(m, box[dim].hi);
  return {lo, hi};
}

struct Item {
  Box box;
  int depth;
};

struct Partial {
  long long examined = 0;
  long long pruned = 0;
  long long proven = 0;
  int max_depth = 0;
  double worst = -INFINITY;
  double min_undecided = INFINITY;
  std::vector<Box> frontier;
  std::vector<LeafRecord> leaves;
  std::optional<std::vector<double>> counterexample;
  bool capped = false;
};

// Certified lower bound of the tape at the midpoint of the box.
std::optional<std::vector<double>> certify_violation(const Tape& tape, const Box& box, double margin) {
  std::vector<double> p(box.size());
  std::vector<Interval> pt(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    p[i] = box[i].mid();
    pt[i] = Interval(p[i]);
  }
  try {
    if (tape.eval(pt.data()).lo > -margin) return p;
  } catch (const GuardError&) {
  }
  return std::nullopt;
}

void run_subtree(const Tape& tape, const Item& root, const ProverOptions& opt, const std::vector<double>& scale,
                 std::atomic<long long>& budget, Partial& out) {
  std::vector<Item> stack{root};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (opt.outside && opt.outside(it.box)) {
      ++out.pruned;
      continue;
    }
    if (budget.fetch_sub(1) <= 0) {
      out.capped = true;
      out.frontier.push_back(it.box);
      continue;
    }
    ++out.examined;
    out.max_depth = std::max(out.max_depth, it.depth);
    double ub = INFINITY;
    try {
      ub = upper_bound(tape, it.box);
    } catch (const GuardError&) {
    }
    if (ub < -opt.margin) {
      ++out.proven;
      out.worst = std::max(out.worst, ub);
      if (opt.record_leaves) out.leaves.push_back({it.box, ub, true});
      continue;
    }
    auto violation = certify_violation(tape, it.box, opt.margin);
    const std::size_t dim = widest_scaled(it.box, scale);
    const bool exhausted = it.depth >= opt.max_depth || it.box[dim].width() < opt.min_width;
    if (violation || exhausted) {
      if (violation && !out.counterexample) out.counterexample = std::move(violation);
      double w = 0.0;
      for (const auto& x : it.box) w = std::max(w, x.width());
      out.min_undecided = std::min(out.min_undecided, w);
      out.frontier.push_back(it.box);
      if (opt.record_leaves) out.leaves.push_back({it.box, ub, false});
      continue;
    }
    auto [lo, hi] = bisect(it.box, dim);
    stack.push_back({std::move(hi), it.depth + 1});
    stack.push_back({std::move(lo), it.depth + 1});
  }
}

nlohmann::json box_json(const Box& b) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& x : b) j.push_back({x.lo, x.hi});
  return j;
}

}  // namespace

Interval enclose(const Tape& tape, const Box& box) {
  if (static_cast<int>(box.size()) != tape.num_vars()) throw std::invalid_argument("enclose: box dimension mismatch");
  return enclose_with(tape, box, tape.eval_grad(box.data()));
}

double upper_bound(const Tape& tape, const Box& box) {
  if (static_cast<int>(box.size()) != tape.num_vars())
    throw std::invalid_argument("upper_bound: box dimension mismatch");
  const DualInterval d = tape.eval_grad(box.data());
  double best = enclose_with(tape, box, d).hi;
  Box reduced = box;
  bool changed = false;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i].is_point()) continue;
    if (d.g[i].lo >= 0.0) {
      reduced[i] = Interval(box[i].hi);
      changed = true;
    } else if (d.g[i].hi <= 0.0) {
      reduced[i] = Interval(box[i].lo);
      changed = true;
    }
  }
  if (changed) best = std::min(best, enclose(tape, reduced).hi);
  return best;
}

const char* status_name(ProofStatus s) { return s == ProofStatus::proven ? "proven" : "undecided"; }

ProofResult prove_nonpositive(const Tape& tape, const Box& box, const ProverOptions& options,
                              const std::string& claim_id) {
  if (static_cast<int>(box.size()) != tape.num_vars())
    throw std::invalid_argument("prove_nonpositive: box dimension mismatch");
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> scale(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) scale[i] = box[i].width() > 0.0 ? box[i].width() : 1.0;

  // Independent work items: the root bisected split_depth times, in a fixed order.
  std::vector<Item> items{{box, 0}};
  for (int level = 0; level < options.split_depth && level < options.max_depth; ++level) {
    std::vector<Item> next;
    next.reserve(items.size() * 2);
    for (const auto& it : items) {
      const std::size_t dim = widest_scaled(it.box, scale);
      if (it.box[dim].width() < options.min_width) {
        next.push_back(it);
        continue;
      }
      auto [lo, hi] = bisect(it.box, dim);
      next.push_back({std::move(lo), it.depth + 1});
      next.push_back({std::move(hi), it.depth + 1});
    }
    items = std::move(next);
  }

  std::vector<Partial> parts(items.size());
  std::atomic<long long> budget{options.max_boxes};
  parallel_for(items.size(), options.threads,
               [&](std::size_t k) { run_subtree(tape, items[k], options, scale, budget, parts[k]); });

  ProofResult r;
  r.claim_id = claim_id;
  r.root = box;
  bool capped = false;
  for (auto& p : parts) {
    r.boxes_examined += p.examined;
    r.boxes_pruned += p.pruned;
    r.leaves_proven += p.proven;
    r.max_depth_reached = std::max(r.max_depth_reached, p.max_depth);
    r.worst_accepted_upper = std::max(r.worst_accepted_upper, p.worst);
    r.min_undecided_width = std::min(r.min_undecided_width, p.min_undecided);
    for (auto& b : p.frontier) r.frontier.push_back(std::move(b));
    for (auto& l : p.leaves) r.leaves.push_back(std::move(l));
    if (p.counterexample && !r.counterexample) r.counterexample = std::move(p.counterexample);
    capped = capped || p.capped;
  }
  r.status = (r.frontier.empty() && !r.counterexample && !capped) ? ProofStatus::proven : ProofStatus::undecided;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string proof_trace_json(const ProofResult& r) {
  nlohmann::json j;
  j["claim_id"] = r.claim_id;
  j["status"] = status_name(r.status);
  j["root"] = box_json(r.root);
  j["boxes_examined"] = r.boxes_examined;
  j["boxes_pruned"] = r.boxes_pruned;
  j["leaves_proven"] = r.leaves_proven;
  j["max_depth_reached"] = r.max_depth_reached;
  j["worst_accepted_upper"] = std::isfinite(r.worst_accepted_upper) ? nlohmann::json(r.worst_accepted_upper)
                                                                    : nlohmann::json(nullptr);
  j["min_undecided_width"] =
      std::isfinite(r.min_undecided_width) ? nlohmann::json(r.min_undecided_width) : nlohmann::json(nullptr);
  j["seconds"] = r.seconds;
  nlohmann::json frontier = nlohmann::json::array();
  for (const auto& b : r.frontier) frontier.push_back(box_json(b));
  j["frontier"] = frontier;
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  nlohmann::json leaves = nlohmann::json::array();
  for (const auto& l : r.leaves) {
    leaves.push_back({{"box", box_json(l.box)},
                      {"upper", std::isfinite(l.upper) ? nlohmann::json(l.upper) : nlohmann::json(nullptr)},
                      {"accepted", l.accepted}});
  }
  j["leaves"] = leaves;
  return j.dump(1);
}

long long replay_leaves(const Tape& tape, const ProofResult& result, double margin) {
  long long bad = 0;
  for (const auto& l : result.leaves) {
    if (!l.accepted) continue;
    double ub = INFINITY;
    try {
      ub = upper_bound(tape, l.box);
    } catch (const GuardError&) {
    }
    if (!(ub < -margin)) ++bad;
  }
  return bad;
}

}  // namespace saddle::rigor
