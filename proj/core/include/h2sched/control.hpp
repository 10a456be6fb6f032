#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "h2sched/bounding.hpp"
#include "h2sched/dispatch.hpp"
#include "h2sched/fuzzy.hpp"
#include "h2sched/plant.hpp"
#include "h2sched/timeseries.hpp"

namespace h2sched {

// Contract volume in kg: fraction of the mean of the yearly production
// maxima, rounded to 0.1 t the way the sizing is quoted.
double contract_volume(std::span<const double> annual_max_tonnes, double fraction);

// Delivery state at the start of a day; day counts from 1.
struct ContractState {
  int day = 1;
  double cumulative_kg = 0.0;
};

// Catch-up-to-the-line rule: deliver what constant pacing demands by the
// end of this day, bounded by what the wind allows today.
double steady_target(const ContractState& st, const PlantSpec& spec, double max_today_kg);

// Fuzzy rule: infer a delivery rate (kg/h) from the day-ahead means,
// scale to a day and clamp into the envelope corridor.
double bflc_target(const FuzzyModel& model, const BoundEnvelope& env, const DailyMeans& day,
                   const ContractState& st, double max_today_kg);

class DailyController {
 public:
  virtual ~DailyController() = default;
  virtual const char* name() const = 0;
  virtual double target(const DailyMeans& day, const ContractState& st,
                        double max_today_kg) const = 0;
};

class SteadyController final : public DailyController {
 public:
  explicit SteadyController(const PlantSpec& spec) : spec_(spec) {}
  const char* name() const override { return "steady"; }
  double target(const DailyMeans& day, const ContractState& st,
                double max_today_kg) const override;

 private:
  PlantSpec spec_;
};

class BflcController final : public DailyController {
 public:
  BflcController(FuzzyModel model, BoundEnvelope env)
      : model_(std::move(model)), env_(std::move(env)) {}
  const char* name() const override { return "bflc"; }
  double target(const DailyMeans& day, const ContractState& st,
                double max_today_kg) const override;

 private:
  FuzzyModel model_;
  BoundEnvelope env_;
};

struct SimulationReport {
  std::string controller;
  double total_revenue_eur = 0.0;
  double hpa_delivered_kg = 0.0;
  double normalized = 0.0;           // revenue / perfect-foresight revenue
  double contract_shortfall_kg = 0.0;
  std::vector<double> daily_target_kg;
  std::vector<double> daily_delivered_kg;
  std::vector<double> daily_revenue_eur;
  Trajectory trajectory;
  std::vector<HourFlows> flows;
};

// Day-by-day closed loop: take the day's realised series as the forecast,
// ask the controller for a target, dispatch the day with that target as
// the delivery floor, accumulate. A year that cannot reach the contract
// is reported through contract_shortfall_kg, never thrown. The
// perfect-foresight revenue used for normalisation is computed here
// unless the caller already has it.
SimulationReport simulate_year(const HourlySeries& s, const PlantSpec& spec,
                               const DailyController& controller,
                               std::optional<double> benchmark_revenue = std::nullopt);

// CSV "controller,total_revenue_eur,hpa_kg,normalized,contract_shortfall_kg".
void write_report_summary_csv(const SimulationReport& rep, const std::string& path);
// CSV "day,target_kg,delivered_kg,cumulative_kg,revenue_eur".
void write_report_daily_csv(const SimulationReport& rep, const std::string& path);

}  // namespace h2sched
