#include <doctest.h>

#include <cmath>

#include "h2sched/control.hpp"
#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"
#include "h2sched/pso.hpp"
#include "testutil.hpp"

using namespace h2sched;

namespace {

HourlySeries constant_year(int days, double e, double h, double w) {
  HourlySeries s;
  s.year_label = "const";
  s.start_epoch_s = 0;
  s.e.assign(static_cast<std::size_t>(days) * 24, e);
  s.h.assign(static_cast<std::size_t>(days) * 24, h);
  s.w.assign(static_cast<std::size_t>(days) * 24, w);
  return s;
}

void check_report(const SimulationReport& rep, const HourlySeries& s, const PlantSpec& spec) {
  const int T = static_cast<int>(s.days());
  REQUIRE(rep.flows.size() == s.hours());
  REQUIRE(rep.daily_target_kg.size() == static_cast<std::size_t>(T));
  REQUIRE(rep.trajectory.days() == T);
  for (const HourFlows& f : rep.flows) check_flows(f, spec);
  double rev = 0.0, delivered = 0.0;
  for (std::size_t t = 0; t < rep.flows.size(); ++t) {
    rev += s.e[t] * rep.flows[t].g2 + s.h[t] * rep.flows[t].m3;
    delivered += rep.flows[t].m2;
  }
  CHECK(rep.total_revenue_eur == doctest::Approx(rev).epsilon(1e-9));
  CHECK(rep.hpa_delivered_kg == doctest::Approx(delivered).epsilon(1e-9));
  CHECK(rep.trajectory.cumulative_kg.back() ==
        doctest::Approx(delivered).epsilon(1e-9));
  CHECK(rep.contract_shortfall_kg ==
        doctest::Approx(std::max(0.0, spec.hpa_total_kg - delivered)).epsilon(1e-9));
  double sum_rev = 0.0;
  for (double r : rep.daily_revenue_eur) sum_rev += r;
  CHECK(rep.total_revenue_eur == doctest::Approx(sum_rev).epsilon(1e-9));
}

}  // namespace

TEST_CASE("contract volume reproduces the sizing arithmetic") {
  std::vector<double> maxima = {122.7, 117.3, 123.2, 120.6, 115.6, 120.9};
  CHECK(contract_volume(maxima, 0.40) == 48000.0);
  std::vector<double> one = {100.0};
  CHECK(contract_volume(one, 0.5) == 50000.0);
  // rounding to 0.1 t
  std::vector<double> odd = {101.0};
  CHECK(contract_volume(odd, 0.33) == doctest::Approx(33300.0).epsilon(1e-12));

  CHECK_THROWS_AS(contract_volume({}, 0.4), ValidationError);
  CHECK_THROWS_AS(contract_volume(maxima, 0.0), ValidationError);
  CHECK_THROWS_AS(contract_volume(maxima, 1.2), ValidationError);
  std::vector<double> neg = {-1.0};
  CHECK_THROWS_AS(contract_volume(neg, 0.4), ValidationError);
}

TEST_CASE("steady target paces the contract") {
  PlantSpec spec;
  ContractState st;
  CHECK(steady_target(st, spec, 1e6) == doctest::Approx(48000.0 / 365.0).epsilon(1e-12));
  // capped by the day's possible production
  CHECK(steady_target(st, spec, 50.0) == 50.0);
  // catch-up after a lull
  st.day = 10;
  st.cumulative_kg = 500.0;
  CHECK(steady_target(st, spec, 1e6) ==
        doctest::Approx(10.0 * 48000.0 / 365.0 - 500.0).epsilon(1e-12));
  // ahead of the line: nothing to do
  st.cumulative_kg = 5000.0;
  CHECK(steady_target(st, spec, 1e6) == 0.0);
  // final day asks for exact completion
  st.day = 365;
  st.cumulative_kg = 47000.0;
  CHECK(steady_target(st, spec, 1e6) == doctest::Approx(1000.0).epsilon(1e-12));

  st.day = 0;
  CHECK_THROWS_AS(steady_target(st, spec, 1e6), ValidationError);
  st.day = 366;
  CHECK_THROWS_AS(steady_target(st, spec, 1e6), ValidationError);
}

TEST_CASE("steady control on a constant year walks the pacing line") {
  PlantSpec spec;
  HourlySeries s = constant_year(365, 30.0, 3.0, 0.5);
  SimulationReport rep = simulate_year(s, spec, SteadyController(spec));
  check_report(rep, s, spec);
  CHECK(rep.controller == "steady");
  CHECK(rep.hpa_delivered_kg == doctest::Approx(48000.0).epsilon(1e-6));
  CHECK(rep.contract_shortfall_kg < 1e-6);
  for (int d = 1; d <= 365; ++d)
    CHECK(rep.trajectory.cumulative_kg[d] ==
          doctest::Approx(48000.0 * d / 365.0).epsilon(1e-6));
  // identical hours make any floor placement equally good
  CHECK(rep.normalized == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a windless year reports the full shortfall instead of throwing") {
  PlantSpec spec;
  HourlySeries s = constant_year(365, 50.0, 3.0, 0.0);
  SimulationReport rep = simulate_year(s, spec, SteadyController(spec));
  check_report(rep, s, spec);
  CHECK(rep.total_revenue_eur == 0.0);
  CHECK(rep.hpa_delivered_kg == 0.0);
  CHECK(rep.contract_shortfall_kg == doctest::Approx(48000.0).epsilon(1e-12));
  CHECK(rep.normalized == 1.0);  // zero against zero
}

TEST_CASE("series and contract lengths must agree") {
  PlantSpec spec;  // 365 contract days
  HourlySeries s = constant_year(10, 30.0, 3.0, 0.5);
  CHECK_THROWS_AS(simulate_year(s, spec, SteadyController(spec)), ValidationError);
}

TEST_CASE("an explicit benchmark revenue drives the normalisation") {
  PlantSpec spec;
  spec.hpa_days = 4;
  spec.hpa_total_kg = 100.0;
  HourlySeries s = constant_year(4, 30.0, 3.0, 0.5);
  SimulationReport rep = simulate_year(s, spec, SteadyController(spec), 12345.0);
  CHECK(rep.normalized == doctest::Approx(rep.total_revenue_eur / 12345.0).epsilon(1e-12));
}

TEST_CASE("the fuzzy controller pipeline honours the contract on a toy year") {
  HourlySeries s = testutil::synth_year(7, 20);
  PlantSpec spec;
  spec.hpa_days = 20;
  DispatchProblem whole;
  whole.e = s.e;
  whole.h = s.h;
  whole.w = s.w;
  whole.spec = spec;
  spec.hpa_total_kg = 0.5 * max_attainable_kg(whole);

  DispatchSolution bench = solve_annual_benchmark(s, spec);
  Trajectory bench_traj = trajectory_from_solution(bench);
  auto means = daily_means(s);
  std::vector<Exemplar> data;
  for (int d = 0; d < 20; ++d) {
    Exemplar ex;
    ex.e = means[d].e;
    ex.h = means[d].h;
    ex.w = means[d].w;
    ex.target = (bench_traj.cumulative_kg[d + 1] - bench_traj.cumulative_kg[d]) / 24.0;
    data.push_back(ex);
  }
  PsoConfig cfg;
  cfg.particles = 8;
  cfg.max_iters = 20;
  cfg.seed = 11;
  TrainingResult tr = train(data, ranges_from_data(data), cfg);

  ExtremePaths ep = extreme_paths(s, spec);
  std::vector<Trajectory> trs = {bench_traj, ep.fast_wind, ep.slow_wind};
  BoundEnvelope env = hull_envelope(trs, spec.hpa_total_kg);

  SimulationReport rep = simulate_year(s, spec, BflcController(tr.model, env));
  check_report(rep, s, spec);
  CHECK(rep.controller == "bflc");
  CHECK(rep.contract_shortfall_kg < 1e-6);
  // the corridor is respected from above throughout
  for (int d = 0; d <= 20; ++d)
    CHECK(rep.trajectory.cumulative_kg[d] <= env.upper(d) + 1e-6);
  // meeting the floor means the perfect-foresight run is an upper bound
  CHECK(rep.normalized <= 1.0 + 1e-9);
  CHECK(rep.normalized > 0.0);
}

TEST_CASE("report files carry the documented columns") {
  PlantSpec spec;
  spec.hpa_days = 3;
  spec.hpa_total_kg = 300.0;
  HourlySeries s = constant_year(3, 40.0, 2.5, 0.6);
  SimulationReport rep = simulate_year(s, spec, SteadyController(spec));
  auto dir = testutil::temp_dir("report_csv");
  auto summary = (dir / "summary.csv").string();
  auto daily = (dir / "daily.csv").string();
  write_report_summary_csv(rep, summary);
  write_report_daily_csv(rep, daily);

  std::string stext = csv::read_file(summary);
  CHECK(stext.rfind("controller,total_revenue_eur,hpa_kg,normalized,contract_shortfall_kg\n",
                    0) == 0);
  CHECK(stext.find("steady,") != std::string::npos);

  std::string dtext = csv::read_file(daily);
  CHECK(dtext.rfind("day,target_kg,delivered_kg,cumulative_kg,revenue_eur\n", 0) == 0);
  int rows = 0;
  for (char c : dtext)
    if (c == '\n') ++rows;
  CHECK(rows == 4);  // header plus one row per day
  CHECK(dtext.find("\n1,") != std::string::npos);
  CHECK(dtext.find("\n3,") != std::string::npos);
}
