#pragma once

// Shared helpers for the test suites: deterministic synthetic data
// generators and independent oracles that recompute results from first
// principles (kept deliberately separate from the library code paths
// they check).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "h2sched/dispatch.hpp"
#include "h2sched/fuzzy.hpp"
#include "h2sched/plant.hpp"
#include "h2sched/timeseries.hpp"

namespace testutil {

inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("h2sched_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------
// synthetic data

// Wind capacity factors with realistic persistence: logistic of an AR(1)
// process. Tuned so a 2 MW park feeding a 1 MW electrolyser can make
// roughly 100-130 t of hydrogen a year.
inline std::vector<double> synth_wind(std::mt19937_64& rng, int hours) {
  std::vector<double> w(hours);
  double z = 0.0;
  for (int t = 0; t < hours; ++t) {
    double g = std::sqrt(-2.0 * std::log(1.0 - u01(rng))) *
               std::cos(2.0 * 3.14159265358979323846 * u01(rng));
    z = 0.96 * z + 0.22 * g;
    w[t] = std::clamp(1.0 / (1.0 + std::exp(-(1.3 * z + 0.45))), 0.0, 1.0);
  }
  return w;
}

// Electricity prices with a seasonal swell, a daily shape and AR(1)
// noise; occasionally dips below zero like real spot markets.
inline std::vector<double> synth_elec(std::mt19937_64& rng, int hours, double base) {
  std::vector<double> e(hours);
  double n = 0.0;
  for (int t = 0; t < hours; ++t) {
    double day = t / 24.0;
    double hour = t % 24;
    double seasonal = 1.0 + 0.18 * std::cos(2.0 * 3.14159265358979323846 * (day - 15.0) / 365.0);
    double daily = 1.0 + 0.16 * std::cos(2.0 * 3.14159265358979323846 * (hour - 19.0) / 24.0) +
                   0.07 * std::cos(4.0 * 3.14159265358979323846 * (hour - 9.0) / 24.0);
    double g = std::sqrt(-2.0 * std::log(1.0 - u01(rng))) *
               std::cos(2.0 * 3.14159265358979323846 * u01(rng));
    n = 0.94 * n + 3.2 * g;
    e[t] = base * seasonal * daily + n;
  }
  return e;
}

// A complete test year: correlated-looking e and w plus hydrogen prices
// from the library's synthetic generator.
inline h2sched::HourlySeries synth_year(std::uint64_t seed, int days = 365,
                                        double mean_h = 3.0) {
  std::mt19937_64 rng(seed);
  h2sched::HourlySeries s;
  s.year_label = "y" + std::to_string(seed);
  s.start_epoch_s = 1483228800;  // 2017-01-01T00:00:00
  int hours = days * 24;
  double base = 34.0 + 14.0 * u01(rng);
  s.e = synth_elec(rng, hours, base);
  s.w = synth_wind(rng, hours);
  s.h = h2sched::synth_hydrogen_prices(s.e, mean_h, seed ^ 0x9e3779b97f4a7c15ull);
  return s;
}

// Random daily dispatch problem spanning both price regimes.
inline h2sched::DispatchProblem random_problem(std::mt19937_64& rng, int hours,
                                               const h2sched::PlantSpec& spec = {}) {
  h2sched::DispatchProblem p;
  p.spec = spec;
  p.e.resize(hours);
  p.h.resize(hours);
  p.w.resize(hours);
  for (int t = 0; t < hours; ++t) {
    p.e[t] = -20.0 + 140.0 * u01(rng);
    p.h[t] = 1.0 + 4.0 * u01(rng);
    p.w[t] = u01(rng);
  }
  double attain = h2sched::max_attainable_kg(p);
  p.hpa_min_kg = attain * std::pow(u01(rng), 0.7);
  return p;
}

// Random membership rows with every breakpoint gap at least a tenth of
// the average. Keeps triangle slopes bounded, so a 1e5-point trapezoid
// reference stays well inside 1e-6 of the true centroid; unconstrained
// rows need a much finer reference grid.
inline h2sched::MembershipParams benign_params(std::mt19937_64& rng, double lo, double hi) {
  std::array<double, 6> gaps;
  double total = 0.0;
  for (double& g : gaps) {
    g = 0.12 + u01(rng);
    total += g;
  }
  h2sched::MembershipParams mp;
  mp.p[0] = lo;
  double x = lo;
  for (int i = 0; i < 6; ++i) {
    x += gaps[i] / total * (hi - lo);
    mp.p[i + 1] = x;
  }
  mp.p[6] = hi;
  return mp;
}

// A fixed, known-good controller used as a test vector throughout the
// suite. Exports hard only when both prices are low and wind is at
// least moderate; note the deliberately degenerate p1=p2 output row.
inline h2sched::FuzzyModel tuned_model() {
  h2sched::FuzzyModel m;
  m.w.p = {0.01, 0.22, 0.57, 0.60, 0.60, 0.87, 0.99};
  m.e.p = {-11.76, 118.85, 413.26, 417.15, 519.96, 569.89, 695.09};
  m.h.p = {1.04, 1.65, 3.04, 3.24, 3.71, 4.36, 5.0};
  m.out.p = {0.0, 4.90, 4.90, 10.34, 11.52, 13.14, 17.36};
  m.rules.fill(h2sched::Label::Low);
  using h2sched::Label;
  m.rules[h2sched::rule_index(Label::Low, Label::Low, Label::Medium)] = Label::High;
  m.rules[h2sched::rule_index(Label::Low, Label::Low, Label::High)] = Label::High;
  return m;
}

// ---------------------------------------------------------------------
// oracles

// Membership re-derived from the definition, for checking the library's
// membership() and centroid independently.
inline double tri_oracle(double x, double a, double b, double c) {
  if (x < a || x > c) return 0.0;
  if (x == b) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (c - x) / (c - b);
}

inline double aggregate_oracle(const h2sched::MembershipParams& out,
                               const std::array<double, 3>& beta, double y) {
  double lo = std::min(beta[0], tri_oracle(y, out.p[0], out.p[0], out.p[2]));
  double me = std::min(beta[1], tri_oracle(y, out.p[1], out.p[3], out.p[5]));
  double hi = std::min(beta[2], tri_oracle(y, out.p[4], out.p[6], out.p[6]));
  return std::max(lo, std::max(me, hi));
}

// Brute-force centroid by trapezoidal integration on a uniform grid. The
// final sample is pinned to p6 exactly; lo + dx * samples can round past
// it, where the aggregate is zero instead of the boundary value.
inline double centroid_numeric(const h2sched::MembershipParams& out,
                               const std::array<double, 3>& beta, int samples = 100000) {
  double lo = out.p[0], hi = out.p[6];
  if (hi <= lo) return lo;
  double area = 0.0, moment = 0.0;
  double dx = (hi - lo) / samples;
  double prev = aggregate_oracle(out, beta, lo);
  for (int i = 1; i <= samples; ++i) {
    double y = i == samples ? hi : lo + dx * i;
    double cur = aggregate_oracle(out, beta, y);
    area += 0.5 * (prev + cur) * dx;
    moment += 0.5 * (prev * (y - dx) + cur * y) * dx;
    prev = cur;
  }
  if (area < 1e-12) return lo;
  return moment / area;
}

// Recompute the revenue of a dispatch solution from its flows.
inline double revenue_oracle(const h2sched::DispatchProblem& p,
                             const std::vector<h2sched::HourFlows>& flows) {
  double rev = 0.0;
  for (std::size_t t = 0; t < flows.size(); ++t)
    rev += p.e[t] * flows[t].g2 + p.h[t] * flows[t].m3;
  return rev;
}

// A random feasible dispatch for dominance checks: never better than the
// optimum. Returns false when it cannot reach the delivery floor.
inline bool random_feasible(std::mt19937_64& rng, const h2sched::DispatchProblem& p,
                            std::vector<h2sched::HourFlows>& flows) {
  const double se = p.spec.specific_energy_mwh_per_kg;
  const int T = static_cast<int>(p.horizon());
  flows.assign(T, {});
  double delivered = 0.0;
  for (int t = 0; t < T; ++t) {
    double g1 = p.w[t] * p.spec.wind_capacity_mw;
    double cap = std::min(g1, p.spec.electrolyser_capacity_mw);
    h2sched::HourFlows& f = flows[t];
    f.g1 = g1;
    f.g3 = cap * u01(rng);
    f.m1 = f.g3 / se;
    f.m2 = f.m1 * u01(rng);
    f.m3 = f.m1 - f.m2;
    f.g2 = f.g1 - f.g3;
    delivered += f.m2;
  }
  // lift deliveries, then production, until the floor is met
  for (int t = 0; t < T && delivered < p.hpa_min_kg; ++t) {
    h2sched::HourFlows& f = flows[t];
    double extra = std::min(f.m3, p.hpa_min_kg - delivered);
    f.m2 += extra;
    f.m3 -= extra;
    delivered += extra;
  }
  for (int t = 0; t < T && delivered < p.hpa_min_kg; ++t) {
    h2sched::HourFlows& f = flows[t];
    double cap = std::min(f.g1, p.spec.electrolyser_capacity_mw);
    double add_g3 = std::min(cap - f.g3, (p.hpa_min_kg - delivered) * se);
    f.g3 += add_g3;
    f.g2 = f.g1 - f.g3;
    f.m1 = f.g3 / se;
    f.m2 += add_g3 / se;
    f.m3 = f.m1 - f.m2;
    delivered += add_g3 / se;
  }
  return delivered >= p.hpa_min_kg - 1e-9;
}

}  // namespace testutil
