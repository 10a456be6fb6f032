#pragma once

#include <span>
#include <string>
#include <vector>

#include "h2sched/dispatch.hpp"
#include "h2sched/plant.hpp"
#include "h2sched/timeseries.hpp"

namespace h2sched {

// Cumulative HPA delivery by end of day d, kg; index 0..T with
// cumulative_kg[0] == 0.
struct Trajectory {
  std::vector<double> cumulative_kg;
  int days() const { return static_cast<int>(cumulative_kg.size()) - 1; }
};

// Daily cumulative HPA deliveries of a dispatch solution.
Trajectory trajectory_from_solution(const DispatchSolution& sol);

// CSV "day,cumulative_kg", day 0..T.
void write_trajectory_csv(const Trajectory& tr, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path);

// Convex hull of historical delivery trajectories, reduced to two
// nondecreasing piecewise-linear chains: every sensible cumulative
// schedule stays between lower() and upper(). Both chains run from (0,0)
// to (T, contract_kg).
struct BoundEnvelope {
  std::vector<double> lower_day, lower_kg;
  std::vector<double> upper_day, upper_kg;
  double contract_kg = 0.0;

  int days() const { return static_cast<int>(lower_day.back()); }
  double lower(double day) const;
  double upper(double day) const;
};

// Monotone-chain hull over every (day, cumulative) point of the given
// trajectories, anchored at (0,0) and (T, contract_kg). Deliveries above
// the contract are truncated to it first. Throws ValidationError when
// trajectories disagree on T or fail to reach the contract.
BoundEnvelope hull_envelope(std::span<const Trajectory> trajectories, double contract_kg);

// CSV "day,lower_kg,upper_kg", one row per integer day; exact because
// every hull vertex sits on an integer day.
void write_envelope_csv(const BoundEnvelope& env, const std::string& path);
BoundEnvelope load_envelope_csv(const std::string& path);

// The two wind-limited extremes for a given year: produce flat out from
// day one versus wait as long as the remaining wind still covers the
// contract. t_fw is the day the fast path completes, t_sw the first day
// the slow path delivers.
struct ExtremePaths {
  Trajectory fast_wind;
  Trajectory slow_wind;
  int t_fw = 0;
  int t_sw = 0;
};

// Throws InfeasibleError (carrying the attainable total) when the wind
// cannot cover the contract at all.
ExtremePaths extreme_paths(const HourlySeries& s, const PlantSpec& spec);

// Clamp a day's delivery target into the envelope corridor: at least what
// keeps the cumulative above lower(day), at most what keeps it below
// upper(day) and below today's possible production, never negative.
double clamp_target(double cumulative_kg, double target_kg, int day, const BoundEnvelope& env,
                    double max_today_kg);

}  // namespace h2sched
