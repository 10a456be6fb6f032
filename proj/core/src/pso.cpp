#include "h2sched/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "h2sched/errors.hpp"

namespace h2sched {

namespace {

constexpr double kStallTol = 1e-9;
constexpr int kStallIters = 10;

// Top 53 bits of the generator, uniform in [0,1); identical draws on
// every platform for a given seed.
double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PsoResult pso_minimize(const std::function<double(std::span<const double>)>& objective,
                       std::span<const std::array<double, 2>> bounds, const PsoConfig& cfg) {
  const std::size_t dim = bounds.size();
  if (dim == 0) throw ValidationError("pso: empty bounds");
  if (cfg.particles < 1) throw ValidationError("pso: need at least one particle");
  if (cfg.max_iters < 0) throw ValidationError("pso: negative iteration count");
  for (std::size_t j = 0; j < dim; ++j)
    if (!(bounds[j][0] <= bounds[j][1]))
      throw ValidationError("pso: bounds inverted in dimension " + std::to_string(j));

  std::mt19937_64 rng(cfg.seed);
  const std::size_t n = static_cast<std::size_t>(cfg.particles);
  std::vector<std::vector<double>> x(n, std::vector<double>(dim));
  std::vector<std::vector<double>> v(n, std::vector<double>(dim));
  std::vector<std::vector<double>> pbest = x;
  std::vector<double> pbest_val(n, std::numeric_limits<double>::infinity());

  PsoResult res;
  res.best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double span = bounds[j][1] - bounds[j][0];
      x[i][j] = bounds[j][0] + u01(rng) * span;
      v[i][j] = (2.0 * u01(rng) - 1.0) * span;
    }
    pbest[i] = x[i];
    pbest_val[i] = objective(x[i]);
    if (pbest_val[i] < res.best_value) {
      res.best_value = pbest_val[i];
      res.best_x = x[i];
    }
  }
  res.objective_trace.push_back(res.best_value);

  int stall = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double r1 = u01(rng);
        double r2 = u01(rng);
        v[i][j] = cfg.inertia * v[i][j] + cfg.cognitive * r1 * (pbest[i][j] - x[i][j]) +
                  cfg.social * r2 * (res.best_x[j] - x[i][j]);
        x[i][j] = std::clamp(x[i][j] + v[i][j], bounds[j][0], bounds[j][1]);
      }
      double val = objective(x[i]);
      if (val < pbest_val[i]) {
        pbest_val[i] = val;
        pbest[i] = x[i];
      }
    }
    // synchronous global best update, fixed particle order
    double prev = res.best_value;
    for (std::size_t i = 0; i < n; ++i) {
      if (pbest_val[i] < res.best_value) {
        res.best_value = pbest_val[i];
        res.best_x = pbest[i];
      }
    }
    res.iterations_run = it + 1;
    res.objective_trace.push_back(res.best_value);
    stall = prev - res.best_value < kStallTol ? stall + 1 : 0;
    if (stall >= kStallIters) break;
  }
  return res;
}

VariableRanges ranges_from_data(std::span<const Exemplar> data) {
  if (data.empty()) throw ValidationError("ranges_from_data: no exemplars");
  VariableRanges r;
  r.w = {data[0].w, data[0].w};
  r.e = {data[0].e, data[0].e};
  r.h = {data[0].h, data[0].h};
  r.out = {data[0].target, data[0].target};
  for (const Exemplar& ex : data) {
    r.w = {std::min(r.w[0], ex.w), std::max(r.w[1], ex.w)};
    r.e = {std::min(r.e[0], ex.e), std::max(r.e[1], ex.e)};
    r.h = {std::min(r.h[0], ex.h), std::max(r.h[1], ex.h)};
    r.out = {std::min(r.out[0], ex.target), std::max(r.out[1], ex.target)};
  }
  return r;
}

namespace {

MembershipParams decode_one(std::span<const double> x, const std::array<double, 2>& range) {
  MembershipParams mf;
  mf.p[0] = range[0];
  mf.p[6] = range[1];
  std::array<double, 5> mid;
  for (int k = 0; k < 5; ++k) mid[k] = std::clamp(x[k], range[0], range[1]);
  std::sort(mid.begin(), mid.end());
  for (int k = 0; k < 5; ++k) mf.p[k + 1] = mid[k];
  return mf;
}

struct Decoded {
  MembershipParams w, e, h, out;
};

Decoded decode(std::span<const double> x, const VariableRanges& ranges) {
  return {decode_one(x.subspan(0, 5), ranges.w), decode_one(x.subspan(5, 5), ranges.e),
          decode_one(x.subspan(10, 5), ranges.h), decode_one(x.subspan(15, 5), ranges.out)};
}

double score(const FuzzyModel& model, std::span<const Exemplar> data) {
  double sse = 0.0;
  double sum_target = 0.0, sum_out = 0.0;
  for (const Exemplar& ex : data) {
    double out = infer(model, ex.e, ex.h, ex.w);
    double diff = ex.target - out;
    sse += diff * diff;
    sum_target += ex.target;
    sum_out += out;
  }
  double total_diff = sum_target - sum_out;
  return sse + total_diff * total_diff;
}

}  // namespace

TrainingResult train(std::span<const Exemplar> data, const VariableRanges& ranges,
                     const PsoConfig& cfg) {
  if (data.empty()) throw ValidationError("train: no exemplars");
  for (const auto& range : {ranges.w, ranges.e, ranges.h, ranges.out})
    if (!(range[0] <= range[1])) throw ValidationError("train: inverted variable range");

  auto objective = [&](std::span<const double> x) {
    Decoded d = decode(x, ranges);
    FuzzyModel model = learn_rules(d.w, d.e, d.h, d.out, data);
    return score(model, data);
  };

  std::vector<std::array<double, 2>> bounds;
  bounds.reserve(20);
  for (const auto& range : {ranges.w, ranges.e, ranges.h, ranges.out})
    for (int k = 0; k < 5; ++k) bounds.push_back(range);

  PsoResult pso = pso_minimize(objective, bounds, cfg);

  Decoded d = decode(pso.best_x, ranges);
  TrainingResult tr;
  tr.model = learn_rules(d.w, d.e, d.h, d.out, data);
  tr.objective = score(tr.model, data);
  tr.iterations_run = pso.iterations_run;
  tr.objective_trace = std::move(pso.objective_trace);
  return tr;
}

}  // namespace h2sched
