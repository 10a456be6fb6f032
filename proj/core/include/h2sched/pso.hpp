#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "h2sched/fuzzy.hpp"

namespace h2sched {

struct PsoConfig {
  int particles = 30;
  int max_iters = 100;
  double inertia = 0.5;
  double cognitive = 1.5;
  double social = 1.5;
  std::uint64_t seed = 0;
};

struct PsoResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  int iterations_run = 0;
  // Best objective after initialisation and after each iteration;
  // non-increasing by construction.
  std::vector<double> objective_trace;
};

// Plain global-best particle swarm. Positions are clamped into the given
// box each step (a dimension with lo == hi is pinned). Deterministic for
// a given seed. Stops at max_iters, or earlier once ten consecutive
// iterations improve the best value by less than 1e-9.
PsoResult pso_minimize(const std::function<double(std::span<const double>)>& objective,
                       std::span<const std::array<double, 2>> bounds, const PsoConfig& cfg);

// [lo, hi] of each controller variable; the outer membership breakpoints
// p0 and p6 are fixed to these, the swarm only places p1..p5.
struct VariableRanges {
  std::array<double, 2> w{}, e{}, h{}, out{};
};

VariableRanges ranges_from_data(std::span<const Exemplar> data);

struct TrainingResult {
  FuzzyModel model;
  double objective = 0.0;
  int iterations_run = 0;
  std::vector<double> objective_trace;
};

// Fit the fuzzy controller to benchmark exemplars. The 20-dimensional
// decision vector holds p1..p5 for w, e, h and the output; every
// evaluation sorts and clamps them, relearns the rule table and scores
//   sum_d (target_d - infer_d)^2 + (sum_d target_d - sum_d infer_d)^2.
// The returned objective is recomputed on the returned model.
TrainingResult train(std::span<const Exemplar> data, const VariableRanges& ranges,
                     const PsoConfig& cfg);

}  // namespace h2sched
