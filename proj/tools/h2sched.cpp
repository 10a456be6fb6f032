// Command line front end for the scheduling toolkit. Five subcommands
// cover the pipeline: synth merges price and wind inputs into a series
// file, benchmark solves the perfect foresight dispatch per year, train
// fits the fuzzy controller to the benchmark exemplars, simulate runs
// the daily controllers closed loop, and report merges comparison
// tables from separate runs.

#include <cstdint>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "h2sched/bounding.hpp"
#include "h2sched/control.hpp"
#include "h2sched/csvio.hpp"
#include "h2sched/dispatch.hpp"
#include "h2sched/errors.hpp"
#include "h2sched/fuzzy.hpp"
#include "h2sched/plant.hpp"
#include "h2sched/pso.hpp"
#include "h2sched/timeseries.hpp"

namespace fs = std::filesystem;
using namespace h2sched;

namespace {

constexpr std::string_view kComparisonHeader =
    "year,steady_rev,bflc_rev,benchmark_rev,steady_norm,bflc_norm";

// Flag combinations CLI11 cannot check on its own (clashing output
// paths, colliding stems) are usage errors, exit code 2 like any other
// bad invocation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return csv::format_double(v); }

struct CommonOpts {
  std::string plant_config;
  double contract_kg = 0.0;
  double contract_fraction = 0.40;
  std::string out_dir = ".";
  CLI::Option* kg_opt = nullptr;
  CLI::Option* fraction_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--plant-config", o.plant_config,
                  "plant parameter file, key = value lines");
  o.kg_opt = cmd->add_option("--contract-kg", o.contract_kg,
                             "annual HPA volume in kg, overrides the config file")
                 ->check(CLI::NonNegativeNumber);
  o.fraction_opt =
      cmd->add_option("--contract-fraction", o.contract_fraction,
                      "size the HPA as this fraction of the mean annual production maximum")
          ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
}

struct YearInput {
  std::string path;
  std::string stem;
  HourlySeries series;
};

// File stems name the per-year outputs, so they have to be unique.
std::vector<YearInput> load_years(const std::vector<std::string>& paths) {
  std::vector<YearInput> years;
  years.reserve(paths.size());
  for (const std::string& p : paths) {
    YearInput y;
    y.path = p;
    y.stem = fs::path(p).stem().string();
    for (const YearInput& other : years)
      if (other.stem == y.stem)
        throw UsageError("'" + other.path + "' and '" + p + "' share the stem '" + y.stem +
                         "'; per-year outputs would collide");
    y.series = load_csv(p);
    years.push_back(std::move(y));
  }
  return years;
}

PlantSpec resolve_plant(const CommonOpts& o) {
  PlantSpec spec;
  if (!o.plant_config.empty()) spec = load_plant_config(o.plant_config);
  if (o.kg_opt->count() > 0) spec.hpa_total_kg = o.contract_kg;
  validate(spec);
  return spec;
}

// --contract-fraction sizes the volume from the given years: the
// fraction of the mean of the per-year production maxima, the way the
// contract was quoted. An explicit --contract-kg wins over everything.
void resolve_contract(const CommonOpts& o, PlantSpec& spec, const std::vector<YearInput>& years) {
  if (o.kg_opt->count() > 0 || o.fraction_opt->count() == 0) return;
  std::vector<double> max_tonnes;
  max_tonnes.reserve(years.size());
  for (const YearInput& y : years) {
    double kg = 0.0;
    std::span<const double> w(y.series.w);
    for (std::size_t d = 0; d < y.series.days(); ++d)
      kg += max_daily_hydrogen(w.subspan(d * 24, 24), spec);
    max_tonnes.push_back(kg / 1000.0);
  }
  spec.hpa_total_kg = contract_volume(max_tonnes, o.contract_fraction);
}

fs::path ensure_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

// Perfect foresight revenue with the floor capped at what the wind can
// deliver, matching the normalisation inside simulate_year.
DispatchSolution capped_benchmark(const HourlySeries& s, const PlantSpec& spec) {
  DispatchProblem p;
  p.e = s.e;
  p.h = s.h;
  p.w = s.w;
  p.spec = spec;
  p.hpa_min_kg = std::min(spec.hpa_total_kg, max_attainable_kg(p));
  return solve(p);
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
  std::string e_path, w_path, out;
  double mean_h = 3.0;
  double noise = 0.25;
  std::uint64_t seed = 0;
};

// One value column under hourly ISO timestamps, e.g. "timestamp,w".
struct Column {
  std::string label;
  std::int64_t start_epoch_s = 0;
  std::vector<double> values;
};

Column read_column_csv(const std::string& path, const std::string& value_header) {
  const std::string text = csv::read_file(path);
  const std::string want = "timestamp," + value_header;
  Column col;
  int line = 0;
  std::size_t pos = 0;
  std::int64_t prev = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view row(text.data() + pos, end - pos);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    pos = end + 1;
    ++line;
    if (line == 1) {
      if (row != want)
        throw FormatError(path + ": expected header '" + want + "', got '" + std::string(row) +
                          "'");
      continue;
    }
    if (row.empty()) continue;
    auto fields = csv::split(row);
    if (fields.size() != 2)
      throw FormatError(path + " line " + std::to_string(line) + ": expected 2 fields, got " +
                        std::to_string(fields.size()));
    std::int64_t t = csv::parse_timestamp(fields[0], path, line);
    if (col.values.empty()) {
      col.start_epoch_s = t;
      col.label = std::string(fields[0].substr(0, 4));
    } else if (t != prev + 3600) {
      throw OrderingError(path + " line " + std::to_string(line) +
                          ": timestamps must advance by exactly one hour");
    }
    prev = t;
    col.values.push_back(csv::parse_double(fields[1], path, line));
  }
  if (col.values.empty()) throw FormatError(path + ": no data rows");
  return col;
}

int cmd_synth(const SynthOpts& o) {
  Column e = read_column_csv(o.e_path, "e_eur_mwh");
  Column w = read_column_csv(o.w_path, "w");
  if (e.values.size() != w.values.size())
    throw ValidationError("'" + o.e_path + "' has " + std::to_string(e.values.size()) +
                          " hours but '" + o.w_path + "' has " + std::to_string(w.values.size()));
  if (e.start_epoch_s != w.start_epoch_s)
    throw ValidationError("'" + o.e_path + "' and '" + o.w_path +
                          "' start at different timestamps");
  HourlySeries s;
  s.year_label = e.label;
  s.start_epoch_s = e.start_epoch_s;
  s.e = std::move(e.values);
  s.w = std::move(w.values);
  s.h = synth_hydrogen_prices(s.e, o.mean_h, o.seed, o.noise);
  validate(s);
  fs::path out(o.out);
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  save_csv(s, o.out);
  std::cout << "synth: " << s.hours() << " hours -> " << o.out << "\n";
  return 0;
}

// ------------------------------------------------------------ benchmark

struct BenchmarkOpts {
  std::vector<std::string> years;
  CommonOpts common;
};

int cmd_benchmark(const BenchmarkOpts& o) {
  std::vector<YearInput> years = load_years(o.years);
  PlantSpec spec = resolve_plant(o.common);
  resolve_contract(o.common, spec, years);
  fs::path dir = ensure_out_dir(o.common.out_dir);
  std::cout << "benchmark: contract " << fmt(spec.hpa_total_kg) << " kg, " << years.size()
            << " year(s)\n";

  struct Outcome {
    double revenue = 0.0, delivered = 0.0;
    std::string error;
  };
  std::vector<std::future<Outcome>> futs;
  futs.reserve(years.size());
  for (const YearInput& y : years) {
    futs.push_back(std::async(std::launch::async, [&y, &spec, &dir] {
      Outcome out;
      try {
        PlantSpec local = spec;
        local.hpa_days = static_cast<int>(y.series.days());
        DispatchSolution sol = solve_annual_benchmark(y.series, local);
        write_solution_csv(sol, (dir / ("benchmark_" + y.stem + ".csv")).string());
        write_trajectory_csv(trajectory_from_solution(sol),
                             (dir / ("trajectory_" + y.stem + ".csv")).string());
        out.revenue = sol.revenue_eur;
        out.delivered = sol.hpa_delivered_kg;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      return out;
    }));
  }

  std::string summary = "year,total_revenue_eur\n";
  bool failed = false;
  for (std::size_t i = 0; i < years.size(); ++i) {
    Outcome out = futs[i].get();
    if (!out.error.empty()) {
      failed = true;
      std::cerr << "benchmark " << years[i].stem << ": " << out.error << "\n";
      continue;
    }
    summary += years[i].stem + "," + fmt(out.revenue) + "\n";
    std::cout << "benchmark " << years[i].stem << ": revenue " << fmt(out.revenue)
              << " EUR, delivered " << fmt(out.delivered) << " kg\n";
  }
  csv::write_file((dir / "benchmark_summary.csv").string(), summary);
  return failed ? 1 : 0;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
  std::vector<std::string> years;
  std::string benchmark_dir;
  int particles = 30;
  int iters = 100;
  std::uint64_t seed = 0;
  CommonOpts common;
};

int cmd_train(const TrainOpts& o) {
  std::vector<YearInput> years = load_years(o.years);
  PlantSpec spec = resolve_plant(o.common);
  resolve_contract(o.common, spec, years);
  fs::path dir = ensure_out_dir(o.common.out_dir);
  fs::path bench_dir = o.benchmark_dir.empty() ? fs::path(o.common.out_dir)
                                               : fs::path(o.benchmark_dir);

  std::vector<Trajectory> trajs;
  std::vector<Exemplar> data;
  for (const YearInput& y : years) {
    fs::path tp = bench_dir / ("trajectory_" + y.stem + ".csv");
    if (!fs::exists(tp))
      throw DependencyError("missing benchmark trajectory " + tp.string() +
                            "; run `h2sched benchmark` on the training years first");
    Trajectory tr = load_trajectory_csv(tp.string());
    if (tr.days() != static_cast<int>(y.series.days()))
      throw ValidationError("trajectory " + tp.string() + " covers " +
                            std::to_string(tr.days()) + " days but series '" + y.path +
                            "' has " + std::to_string(y.series.days()));
    std::vector<DailyMeans> means = daily_means(y.series);
    for (int d = 1; d <= tr.days(); ++d) {
      Exemplar ex;
      ex.e = means[d - 1].e;
      ex.h = means[d - 1].h;
      ex.w = means[d - 1].w;
      ex.target = (tr.cumulative_kg[d] - tr.cumulative_kg[d - 1]) / 24.0;
      data.push_back(ex);
    }
    trajs.push_back(std::move(tr));
  }
  if (years.size() == 1)
    std::cerr << "warning: single training year; the envelope degenerates to that "
                 "trajectory's own hull\n";

  // Build the envelope first; a contract the trajectories cannot carry
  // should fail before the swarm burns any time.
  write_envelope_csv(hull_envelope(trajs, spec.hpa_total_kg), (dir / "envelope.csv").string());

  PsoConfig cfg;
  cfg.particles = o.particles;
  cfg.max_iters = o.iters;
  cfg.seed = o.seed;
  TrainingResult res = train(data, ranges_from_data(data), cfg);

  save_model(res.model, (dir / "model.txt").string());
  std::string trace = "iter,objective\n";
  for (std::size_t i = 0; i < res.objective_trace.size(); ++i)
    trace += std::to_string(i) + "," + fmt(res.objective_trace[i]) + "\n";
  csv::write_file((dir / "objective_trace.csv").string(), trace);

  std::cout << "train: objective " << fmt(res.objective) << " after " << res.iterations_run
            << " iteration(s) on " << data.size() << " exemplars; wrote model.txt, "
            << "objective_trace.csv, envelope.csv in " << dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------- simulate

struct SimulateOpts {
  std::vector<std::string> years;
  std::string controller = "both";
  std::string model_path, envelope_path;
  CommonOpts common;
};

int cmd_simulate(const SimulateOpts& o) {
  std::vector<YearInput> years = load_years(o.years);
  PlantSpec spec = resolve_plant(o.common);
  resolve_contract(o.common, spec, years);
  fs::path dir = ensure_out_dir(o.common.out_dir);
  const bool run_steady = o.controller != "bflc";
  const bool run_bflc = o.controller != "steady";

  std::optional<BflcController> bflc;
  if (run_bflc) {
    fs::path mp = o.model_path.empty() ? dir / "model.txt" : fs::path(o.model_path);
    fs::path ep = o.envelope_path.empty() ? dir / "envelope.csv" : fs::path(o.envelope_path);
    if (!fs::exists(mp))
      throw DependencyError("missing fuzzy model " + mp.string() +
                            "; run `h2sched train` first or pass --model");
    if (!fs::exists(ep))
      throw DependencyError("missing envelope " + ep.string() +
                            "; run `h2sched train` first or pass --envelope");
    bflc.emplace(load_model(mp.string()), load_envelope_csv(ep.string()));
  }

  struct Outcome {
    std::optional<SimulationReport> steady, fuzzy;
    double benchmark_rev = 0.0;
    std::string error;
  };
  std::vector<std::future<Outcome>> futs;
  futs.reserve(years.size());
  for (const YearInput& y : years) {
    futs.push_back(std::async(std::launch::async, [&y, &spec, &dir, &bflc, run_steady,
                                                   run_bflc] {
      Outcome out;
      try {
        PlantSpec local = spec;
        local.hpa_days = static_cast<int>(y.series.days());
        out.benchmark_rev = capped_benchmark(y.series, local).revenue_eur;
        if (run_steady) {
          SteadyController ctrl(local);
          out.steady = simulate_year(y.series, local, ctrl, out.benchmark_rev);
          write_report_daily_csv(*out.steady, (dir / ("sim_steady_" + y.stem + ".csv")).string());
        }
        if (run_bflc) {
          out.fuzzy = simulate_year(y.series, local, *bflc, out.benchmark_rev);
          write_report_daily_csv(*out.fuzzy, (dir / ("sim_bflc_" + y.stem + ".csv")).string());
        }
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      return out;
    }));
  }

  std::string cmp = std::string(kComparisonHeader) + "\n";
  bool failed = false;
  for (std::size_t i = 0; i < years.size(); ++i) {
    Outcome out = futs[i].get();
    if (!out.error.empty()) {
      failed = true;
      std::cerr << "simulate " << years[i].stem << ": " << out.error << "\n";
      continue;
    }
    auto describe = [&](const SimulationReport& rep) {
      std::cout << "simulate " << years[i].stem << " " << rep.controller << ": revenue "
                << fmt(rep.total_revenue_eur) << " EUR, normalized " << fmt(rep.normalized)
                << ", shortfall " << fmt(rep.contract_shortfall_kg) << " kg\n";
    };
    if (out.steady) describe(*out.steady);
    if (out.fuzzy) describe(*out.fuzzy);
    cmp += years[i].stem + ",";
    cmp += (out.steady ? fmt(out.steady->total_revenue_eur) : std::string()) + ",";
    cmp += (out.fuzzy ? fmt(out.fuzzy->total_revenue_eur) : std::string()) + ",";
    cmp += fmt(out.benchmark_rev) + ",";
    cmp += (out.steady ? fmt(out.steady->normalized) : std::string()) + ",";
    cmp += (out.fuzzy ? fmt(out.fuzzy->normalized) : std::string()) + "\n";
  }
  csv::write_file((dir / "comparison.csv").string(), cmp);
  return failed ? 1 : 0;
}

// --------------------------------------------------------------- report

struct ReportOpts {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
};

int cmd_report(const ReportOpts& o) {
  fs::path dir = ensure_out_dir(o.out_dir);
  fs::path out = dir / "comparison.csv";
  for (const std::string& in : o.inputs) {
    std::error_code ec;
    if (fs::exists(out) && fs::equivalent(fs::path(in), out, ec) && !ec)
      throw UsageError("merged output " + out.string() +
                       " is also an input; pick a different --out-dir");
  }

  std::string merged = std::string(kComparisonHeader) + "\n";
  std::size_t rows = 0;
  for (const std::string& in : o.inputs) {
    const std::string text = csv::read_file(in);
    std::size_t pos = 0;
    int line = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string_view row(text.data() + pos, end - pos);
      if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
      pos = end + 1;
      ++line;
      if (line == 1) {
        if (row != kComparisonHeader)
          throw FormatError(in + ": expected comparison header '" +
                            std::string(kComparisonHeader) + "', got '" + std::string(row) + "'");
        continue;
      }
      if (row.empty()) continue;
      if (csv::split(row).size() != 6)
        throw FormatError(in + " line " + std::to_string(line) + ": expected 6 fields");
      merged += std::string(row) + "\n";
      ++rows;
    }
  }
  csv::write_file(out.string(), merged);
  std::cout << "report: " << rows << " row(s) from " << o.inputs.size() << " table(s) -> "
            << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hydrogen purchase agreement scheduling toolkit"};
  app.require_subcommand(1);

  SynthOpts so;
  BenchmarkOpts bo;
  TrainOpts to;
  SimulateOpts mo;
  ReportOpts ro;

  CLI::App* synth = app.add_subcommand(
      "synth", "merge electricity and wind inputs, synthesize hydrogen prices");
  synth->add_option("--e", so.e_path, "electricity price CSV, header timestamp,e_eur_mwh")
      ->required();
  synth->add_option("--w", so.w_path, "wind capacity factor CSV, header timestamp,w")
      ->required();
  synth->add_option("--out", so.out, "output series CSV")->required();
  synth->add_option("--mean-h", so.mean_h, "target mean hydrogen price, EUR/kg")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise", so.noise, "hourly perturbation amplitude")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999));
  synth->add_option("--seed", so.seed, "random seed")->capture_default_str();

  CLI::App* bench =
      app.add_subcommand("benchmark", "perfect foresight dispatch for each year");
  bench->add_option("--years", bo.years, "series CSV files")->required()->expected(-1);
  add_common(bench, bo.common);

  CLI::App* train_cmd =
      app.add_subcommand("train", "fit the fuzzy controller to benchmark exemplars");
  train_cmd->add_option("--years", to.years, "training series CSV files")
      ->required()
      ->expected(-1);
  train_cmd->add_option("--benchmark-dir", to.benchmark_dir,
                        "directory holding trajectory_<year>.csv, defaults to --out-dir");
  train_cmd->add_option("--particles", to.particles, "swarm size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--iters", to.iters, "swarm iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", to.seed, "swarm seed")->capture_default_str();
  add_common(train_cmd, to.common);

  CLI::App* sim = app.add_subcommand("simulate", "closed loop controller runs per year");
  sim->add_option("--years", mo.years, "series CSV files")->required()->expected(-1);
  sim->add_option("--controller", mo.controller, "which controller to run")
      ->capture_default_str()
      ->check(CLI::IsMember({"steady", "bflc", "both"}));
  sim->add_option("--model", mo.model_path, "fuzzy model file, defaults to <out-dir>/model.txt");
  sim->add_option("--envelope", mo.envelope_path,
                  "envelope CSV, defaults to <out-dir>/envelope.csv");
  add_common(sim, mo.common);

  CLI::App* rep = app.add_subcommand("report", "merge comparison tables from several runs");
  rep->add_option("inputs", ro.inputs, "comparison CSV files")->required()->expected(-1);
  rep->add_option("--out-dir", ro.out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(so);
    if (bench->parsed()) return cmd_benchmark(bo);
    if (train_cmd->parsed()) return cmd_train(to);
    if (sim->parsed()) return cmd_simulate(mo);
    return cmd_report(ro);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
