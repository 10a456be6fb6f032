// Microbenchmarks for the hot paths: daily dispatch, the annual
// benchmark solve, fuzzy inference and learning, hull construction,
// and a full simulated year under each controller.
#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "h2sched/bounding.hpp"
#include "h2sched/control.hpp"
#include "h2sched/dispatch.hpp"
#include "h2sched/fuzzy.hpp"
#include "h2sched/pso.hpp"
#include "h2sched/timeseries.hpp"
#include "testutil.hpp"

using namespace h2sched;

namespace {

// A plausible envelope without running the full pipeline: three pacing
// curves between empty and full, hulled into a corridor.
BoundEnvelope synthetic_envelope(double contract_kg, int days) {
  std::vector<Trajectory> trajs(3);
  for (int d = 0; d <= days; ++d) {
    double f = static_cast<double>(d) / days;
    trajs[0].cumulative_kg.push_back(contract_kg * f);
    trajs[1].cumulative_kg.push_back(contract_kg * f * f);
    trajs[2].cumulative_kg.push_back(contract_kg * std::sqrt(f));
  }
  return hull_envelope(trajs, contract_kg);
}

}  // namespace

static void BM_DailyDispatch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<DispatchProblem> probs;
  for (int i = 0; i < 64; ++i) probs.push_back(testutil::random_problem(rng, 24));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(probs[i]).revenue_eur);
    i = (i + 1) % probs.size();
  }
  state.SetItemsProcessed(state.iterations() * 24);
}
BENCHMARK(BM_DailyDispatch);

static void BM_DailyLpOracle(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<DispatchProblem> probs;
  for (int i = 0; i < 16; ++i) probs.push_back(testutil::random_problem(rng, 24));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_oracle(probs[i]).revenue_eur);
    i = (i + 1) % probs.size();
  }
  state.SetItemsProcessed(state.iterations() * 24);
}
BENCHMARK(BM_DailyLpOracle);

static void BM_AnnualBenchmark(benchmark::State& state) {
  int days = static_cast<int>(state.range(0));
  HourlySeries s = testutil::synth_year(7, days);
  PlantSpec spec;
  spec.hpa_days = days;
  spec.hpa_total_kg = 48000.0 * days / 365.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_annual_benchmark(s, spec).revenue_eur);
  }
  state.SetComplexityN(days);
}
BENCHMARK(BM_AnnualBenchmark)->RangeMultiplier(2)->Range(46, 365)->Complexity();

static void BM_Infer(benchmark::State& state) {
  FuzzyModel model = testutil::tuned_model();
  std::mt19937_64 rng(3);
  struct In {
    double e, h, w;
  };
  std::vector<In> in(256);
  for (In& x : in)
    x = {-20.0 + 160.0 * testutil::u01(rng), 1.0 + 4.0 * testutil::u01(rng),
         testutil::u01(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(infer(model, in[i].e, in[i].h, in[i].w));
    i = (i + 1) % in.size();
  }
}
BENCHMARK(BM_Infer);

static void BM_Defuzzify(benchmark::State& state) {
  FuzzyModel model = testutil::tuned_model();
  std::mt19937_64 rng(5);
  std::vector<std::array<double, 3>> clips(256);
  for (auto& c : clips)
    c = {testutil::u01(rng), testutil::u01(rng), testutil::u01(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(defuzzify(model.out, clips[i]));
    i = (i + 1) % clips.size();
  }
}
BENCHMARK(BM_Defuzzify);

static void BM_LearnRules(benchmark::State& state) {
  HourlySeries s = testutil::synth_year(11, 365);
  PlantSpec spec;
  DispatchSolution sol = solve_annual_benchmark(s, spec);
  Trajectory tr = trajectory_from_solution(sol);
  std::vector<DailyMeans> means = daily_means(s);
  std::vector<Exemplar> data;
  for (int d = 1; d <= tr.days(); ++d)
    data.push_back({means[d - 1].e, means[d - 1].h, means[d - 1].w,
                    (tr.cumulative_kg[d] - tr.cumulative_kg[d - 1]) / 24.0});
  FuzzyModel model = testutil::tuned_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        learn_rules(model.w, model.e, model.h, model.out, data).rules);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_LearnRules);

static void BM_HullEnvelope(benchmark::State& state) {
  PlantSpec spec;
  std::vector<Trajectory> trajs;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    HourlySeries s = testutil::synth_year(seed, 365);
    trajs.push_back(trajectory_from_solution(solve_annual_benchmark(s, spec)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull_envelope(trajs, spec.hpa_total_kg).lower_kg);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trajs.size() * 366));
}
BENCHMARK(BM_HullEnvelope);

static void BM_SimulateYearSteady(benchmark::State& state) {
  HourlySeries s = testutil::synth_year(21, 365);
  PlantSpec spec;
  SteadyController steady(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_year(s, spec, steady, 1.0).total_revenue_eur);
  }
}
BENCHMARK(BM_SimulateYearSteady);

static void BM_SimulateYearBflc(benchmark::State& state) {
  HourlySeries s = testutil::synth_year(21, 365);
  PlantSpec spec;
  BoundEnvelope env = synthetic_envelope(spec.hpa_total_kg, spec.hpa_days);
  BflcController bflc(testutil::tuned_model(), env);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_year(s, spec, bflc, 1.0).total_revenue_eur);
  }
}
BENCHMARK(BM_SimulateYearBflc);

BENCHMARK_MAIN();
