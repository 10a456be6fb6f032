#include "h2sched/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"

namespace h2sched {

double contract_volume(std::span<const double> annual_max_tonnes, double fraction) {
  if (annual_max_tonnes.empty())
    throw ValidationError("contract_volume: no annual maxima given");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValidationError("contract_volume: fraction " + csv::format_double(fraction) +
                          " outside (0,1]");
  for (double t : annual_max_tonnes)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw ValidationError("contract_volume: bad annual maximum");
  double mean = std::accumulate(annual_max_tonnes.begin(), annual_max_tonnes.end(), 0.0) /
                static_cast<double>(annual_max_tonnes.size());
  double tonnes = std::round(fraction * mean * 10.0) / 10.0;
  return tonnes * 1000.0;
}

double steady_target(const ContractState& st, const PlantSpec& spec, double max_today_kg) {
  if (spec.hpa_days < 1) throw ValidationError("steady_target: hpa_days must be positive");
  if (st.day < 1 || st.day > spec.hpa_days)
    throw ValidationError("steady_target: day " + std::to_string(st.day) + " outside 1.." +
                          std::to_string(spec.hpa_days));
  double pace = static_cast<double>(st.day) * spec.hpa_total_kg /
                static_cast<double>(spec.hpa_days);
  return std::max(0.0, std::min(pace - st.cumulative_kg, max_today_kg));
}

double bflc_target(const FuzzyModel& model, const BoundEnvelope& env, const DailyMeans& day,
                   const ContractState& st, double max_today_kg) {
  double rate = infer(model, day.e, day.h, day.w);  // kg per hour
  double want = std::min(24.0 * rate, max_today_kg);
  return clamp_target(st.cumulative_kg, want, st.day, env, max_today_kg);
}

double SteadyController::target(const DailyMeans&, const ContractState& st,
                                double max_today_kg) const {
  return steady_target(st, spec_, max_today_kg);
}

double BflcController::target(const DailyMeans& day, const ContractState& st,
                              double max_today_kg) const {
  return bflc_target(model_, env_, day, st, max_today_kg);
}

SimulationReport simulate_year(const HourlySeries& s, const PlantSpec& spec,
                               const DailyController& controller,
                               std::optional<double> benchmark_revenue) {
  validate(s);
  validate(spec);
  const int T = static_cast<int>(s.days());
  if (spec.hpa_days != T)
    throw ValidationError("simulate_year: spec covers " + std::to_string(spec.hpa_days) +
                          " days but the series has " + std::to_string(T));

  auto means = daily_means(s);
  SimulationReport rep;
  rep.controller = controller.name();
  rep.trajectory.cumulative_kg.assign(static_cast<std::size_t>(T) + 1, 0.0);
  rep.flows.reserve(s.hours());

  double cumulative = 0.0;
  for (int d = 0; d < T; ++d) {
    std::size_t off = static_cast<std::size_t>(d) * 24;
    std::span<const double> day_w(s.w.data() + off, 24);
    double max_today = max_daily_hydrogen(day_w, spec);
    ContractState st{d + 1, cumulative};
    double target = controller.target(means[d], st, max_today);

    DispatchProblem day_problem;
    day_problem.e.assign(s.e.begin() + off, s.e.begin() + off + 24);
    day_problem.h.assign(s.h.begin() + off, s.h.begin() + off + 24);
    day_problem.w.assign(s.w.begin() + off, s.w.begin() + off + 24);
    day_problem.hpa_min_kg = target;
    day_problem.spec = spec;
    DispatchSolution day_sol = solve(day_problem);

    cumulative += day_sol.hpa_delivered_kg;
    rep.daily_target_kg.push_back(target);
    rep.daily_delivered_kg.push_back(day_sol.hpa_delivered_kg);
    rep.daily_revenue_eur.push_back(day_sol.revenue_eur);
    rep.trajectory.cumulative_kg[static_cast<std::size_t>(d) + 1] = cumulative;
    rep.total_revenue_eur += day_sol.revenue_eur;
    rep.flows.insert(rep.flows.end(), day_sol.flows.begin(), day_sol.flows.end());
  }
  rep.hpa_delivered_kg = cumulative;
  rep.contract_shortfall_kg = std::max(0.0, spec.hpa_total_kg - cumulative);

  double bench;
  if (benchmark_revenue) {
    bench = *benchmark_revenue;
  } else {
    // Cap the floor at what the wind allows so an infeasible year still
    // yields a reference revenue instead of an error.
    DispatchProblem whole;
    whole.e = s.e;
    whole.h = s.h;
    whole.w = s.w;
    whole.spec = spec;
    whole.hpa_min_kg = 0.0;
    whole.hpa_min_kg = std::min(spec.hpa_total_kg, max_attainable_kg(whole));
    bench = solve(whole).revenue_eur;
  }
  if (std::abs(bench) < 1e-9)
    rep.normalized = std::abs(rep.total_revenue_eur) < 1e-9 ? 1.0 : 0.0;
  else
    rep.normalized = rep.total_revenue_eur / bench;
  return rep;
}

void write_report_summary_csv(const SimulationReport& rep, const std::string& path) {
  std::string out = "controller,total_revenue_eur,hpa_kg,normalized,contract_shortfall_kg\n";
  out += rep.controller + "," + csv::format_double(rep.total_revenue_eur) + "," +
         csv::format_double(rep.hpa_delivered_kg) + "," + csv::format_double(rep.normalized) +
         "," + csv::format_double(rep.contract_shortfall_kg) + "\n";
  csv::write_file(path, out);
}

void write_report_daily_csv(const SimulationReport& rep, const std::string& path) {
  std::string out = "day,target_kg,delivered_kg,cumulative_kg,revenue_eur\n";
  for (std::size_t d = 0; d < rep.daily_target_kg.size(); ++d) {
    out += std::to_string(d + 1) + "," + csv::format_double(rep.daily_target_kg[d]) + "," +
           csv::format_double(rep.daily_delivered_kg[d]) + "," +
           csv::format_double(rep.trajectory.cumulative_kg[d + 1]) + "," +
           csv::format_double(rep.daily_revenue_eur[d]) + "\n";
  }
  csv::write_file(path, out);
}

}  // namespace h2sched
