#pragma once

#include <string>
#include <vector>

#include "h2sched/plant.hpp"
#include "h2sched/timeseries.hpp"

namespace h2sched {

// Perfect-foresight dispatch over an arbitrary hourly horizon. The wind
// energy g1 is fixed by w (no curtailment, no import); the only decisions
// are how much energy to feed the electrolyser each hour and how to split
// the hydrogen between the purchase agreement and the market. Deliveries
// under the agreement earn nothing here: the contract pays a fixed lump
// sum, so the objective is grid sales plus hydrogen market sales only.
struct DispatchProblem {
  std::vector<double> e;  // EUR/MWh
  std::vector<double> h;  // EUR/kg
  std::vector<double> w;  // capacity factor in [0,1]
  double hpa_min_kg = 0.0;
  PlantSpec spec;

  std::size_t horizon() const { return e.size(); }
};

struct DispatchSolution {
  std::vector<HourFlows> flows;
  double revenue_eur = 0.0;
  double hpa_delivered_kg = 0.0;
  // Shadow price of the delivery requirement, EUR/kg; zero when the
  // requirement is slack at the optimum.
  double dual_price_eur_per_kg = 0.0;
};

// Exact optimum via the Lagrangian dual of the single coupling constraint
// (total HPA delivery >= hpa_min_kg). For a fixed multiplier every hour
// decouples and has a closed form; the multiplier is found by bisection
// and marginal hours are rationed proportionally. Runs in O(horizon) per
// bisection step. Throws InfeasibleError (carrying the attainable total)
// when the requirement exceeds what the wind can make, ValidationError on
// malformed input.
DispatchSolution solve(const DispatchProblem& p);

// Year-long benchmark: one dispatch over the whole series with the
// contract total as the delivery floor.
DispatchSolution solve_annual_benchmark(const HourlySeries& s, const PlantSpec& spec);

// Same LP solved by the generic dense simplex. Kept strictly separate
// from solve() so tests can cross-check the two routes; not meant for the
// production path (a full year is far slower than solve()).
DispatchSolution lp_oracle(const DispatchProblem& p);

// Largest total HPA delivery the wind allows, in kg.
double max_attainable_kg(const DispatchProblem& p);

// CSV with header "hour,g1,g2,g3,m1,m2,m3", one row per hour.
void write_solution_csv(const DispatchSolution& sol, const std::string& path);

}  // namespace h2sched
