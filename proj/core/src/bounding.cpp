#include "h2sched/bounding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"

namespace h2sched {

namespace {

void validate_trajectory(const Trajectory& tr, const char* what) {
  if (tr.cumulative_kg.size() < 2)
    throw ValidationError(std::string(what) + ": trajectory needs at least day 0 and day 1");
  if (std::abs(tr.cumulative_kg.front()) > 1e-9)
    throw ValidationError(std::string(what) + ": trajectory must start at zero");
  for (std::size_t i = 1; i < tr.cumulative_kg.size(); ++i)
    if (tr.cumulative_kg[i] < tr.cumulative_kg[i - 1] - 1e-9)
      throw ValidationError(std::string(what) + ": cumulative delivery decreases at day " +
                            std::to_string(i));
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  double x0 = xs[i - 1], x1 = xs[i];
  double t = (x - x0) / (x1 - x0);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

}  // namespace

Trajectory trajectory_from_solution(const DispatchSolution& sol) {
  if (sol.flows.empty() || sol.flows.size() % 24 != 0)
    throw ValidationError("trajectory_from_solution: horizon is not whole days");
  Trajectory tr;
  tr.cumulative_kg.assign(sol.flows.size() / 24 + 1, 0.0);
  for (std::size_t t = 0; t < sol.flows.size(); ++t)
    tr.cumulative_kg[t / 24 + 1] += sol.flows[t].m2;
  for (std::size_t d = 1; d < tr.cumulative_kg.size(); ++d)
    tr.cumulative_kg[d] += tr.cumulative_kg[d - 1];
  return tr;
}

void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
  validate_trajectory(tr, "write_trajectory_csv");
  std::string out = "day,cumulative_kg\n";
  for (std::size_t d = 0; d < tr.cumulative_kg.size(); ++d)
    out += std::to_string(d) + "," + csv::format_double(tr.cumulative_kg[d]) + "\n";
  csv::write_file(path, out);
}

Trajectory load_trajectory_csv(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "day,cumulative_kg")
    throw FormatError(path + ": expected header 'day,cumulative_kg', got '" + line + "'");
  Trajectory tr;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2)
      throw FormatError(path + ": line " + std::to_string(lineno) + ": expected 2 columns");
    double day = csv::parse_double(fields[0], path, lineno);
    if (day != static_cast<double>(tr.cumulative_kg.size()))
      throw FormatError(path + ": line " + std::to_string(lineno) + ": days must run 0,1,2,...");
    tr.cumulative_kg.push_back(csv::parse_double(fields[1], path, lineno));
  }
  validate_trajectory(tr, path.c_str());
  return tr;
}

double BoundEnvelope::lower(double day) const { return interp(lower_day, lower_kg, day); }
double BoundEnvelope::upper(double day) const { return interp(upper_day, upper_kg, day); }

BoundEnvelope hull_envelope(std::span<const Trajectory> trajectories, double contract_kg) {
  if (trajectories.empty()) throw ValidationError("hull_envelope: no trajectories");
  if (!(contract_kg > 0)) throw ValidationError("hull_envelope: contract must be positive");
  const int T = trajectories.front().days();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(trajectories.size() * (static_cast<std::size_t>(T) + 1) + 2);
  for (const Trajectory& tr : trajectories) {
    validate_trajectory(tr, "hull_envelope");
    if (tr.days() != T)
      throw ValidationError("hull_envelope: trajectory horizons differ (" + std::to_string(T) +
                            " vs " + std::to_string(tr.days()) + " days)");
    if (tr.cumulative_kg.back() < contract_kg - 1e-6)
      throw ValidationError("hull_envelope: trajectory ends at " +
                            csv::format_double(tr.cumulative_kg.back()) +
                            " kg, short of the contract " + csv::format_double(contract_kg));
    for (int d = 0; d <= T; ++d)
      pts.emplace_back(d, std::min(tr.cumulative_kg[d], contract_kg));
  }
  pts.emplace_back(0.0, 0.0);
  pts.emplace_back(static_cast<double>(T), contract_kg);

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // monotone chain; collinear points are dropped. Both chains share the
  // pop condition, only the scan direction differs.
  auto build = [&](bool upper) {
    std::vector<std::pair<double, double>> chain;
    auto scan = [&](const std::pair<double, double>& p) {
      while (chain.size() >= 2) {
        const auto& o = chain[chain.size() - 2];
        const auto& a = chain[chain.size() - 1];
        if (cross(o.first, o.second, a.first, a.second, p.first, p.second) <= 0.0)
          chain.pop_back();
        else
          break;
      }
      chain.push_back(p);
    };
    if (upper) {
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
      std::reverse(chain.begin(), chain.end());
    } else {
      for (const auto& p : pts) scan(p);
    }
    return chain;
  };

  BoundEnvelope env;
  env.contract_kg = contract_kg;
  for (const auto& [x, y] : build(false)) {
    env.lower_day.push_back(x);
    env.lower_kg.push_back(y);
  }
  for (const auto& [x, y] : build(true)) {
    env.upper_day.push_back(x);
    env.upper_kg.push_back(y);
  }
  return env;
}

void write_envelope_csv(const BoundEnvelope& env, const std::string& path) {
  std::string out = "day,lower_kg,upper_kg\n";
  for (int d = 0; d <= env.days(); ++d)
    out += std::to_string(d) + "," + csv::format_double(env.lower(d)) + "," +
           csv::format_double(env.upper(d)) + "\n";
  csv::write_file(path, out);
}

BoundEnvelope load_envelope_csv(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "day,lower_kg,upper_kg")
    throw FormatError(path + ": expected header 'day,lower_kg,upper_kg', got '" + line + "'");
  BoundEnvelope env;
  int lineno = 1;
  int expect_day = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 3)
      throw FormatError(path + ": line " + std::to_string(lineno) + ": expected 3 columns");
    double day = csv::parse_double(fields[0], path, lineno);
    if (day != static_cast<double>(expect_day))
      throw FormatError(path + ": line " + std::to_string(lineno) + ": days must run 0,1,2,...");
    double lo = csv::parse_double(fields[1], path, lineno);
    double hi = csv::parse_double(fields[2], path, lineno);
    if (lo > hi + 1e-9)
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": lower above upper");
    env.lower_day.push_back(day);
    env.lower_kg.push_back(lo);
    env.upper_day.push_back(day);
    env.upper_kg.push_back(hi);
    ++expect_day;
  }
  if (env.lower_day.size() < 2) throw FormatError(path + ": envelope needs at least two days");
  if (std::abs(env.lower_kg.back() - env.upper_kg.back()) > 1e-6)
    throw ValidationError(path + ": envelope does not close at the contract volume");
  env.contract_kg = env.upper_kg.back();
  return env;
}

ExtremePaths extreme_paths(const HourlySeries& s, const PlantSpec& spec) {
  validate(s);
  validate(spec);
  const int T = static_cast<int>(s.days());
  std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
  for (int d = 0; d < T; ++d) {
    std::span<const double> day_w(s.w.data() + static_cast<std::size_t>(d) * 24, 24);
    prefix[d + 1] = prefix[d] + max_daily_hydrogen(day_w, spec);
  }
  const double target = spec.hpa_total_kg;
  if (prefix[T] < target - 1e-6)
    throw InfeasibleError("extreme_paths: wind supports only " + csv::format_double(prefix[T]) +
                              " kg of the " + csv::format_double(target) + " kg contract",
                          prefix[T]);

  ExtremePaths ep;
  ep.fast_wind.cumulative_kg.resize(static_cast<std::size_t>(T) + 1);
  ep.slow_wind.cumulative_kg.resize(static_cast<std::size_t>(T) + 1);
  ep.t_fw = T;
  ep.t_sw = T;
  for (int d = 0; d <= T; ++d) {
    double fast = std::min(prefix[d], target);
    double slow = std::max(0.0, target - (prefix[T] - prefix[d]));
    ep.fast_wind.cumulative_kg[d] = fast;
    ep.slow_wind.cumulative_kg[d] = slow;
  }
  for (int d = 1; d <= T; ++d) {
    if (ep.fast_wind.cumulative_kg[d] >= target - 1e-9) {
      ep.t_fw = d;
      break;
    }
  }
  for (int d = 1; d <= T; ++d) {
    if (ep.slow_wind.cumulative_kg[d] > 1e-9) {
      ep.t_sw = d;
      break;
    }
  }
  return ep;
}

double clamp_target(double cumulative_kg, double target_kg, int day, const BoundEnvelope& env,
                    double max_today_kg) {
  if (day < 1 || day > env.days())
    throw ValidationError("clamp_target: day " + std::to_string(day) + " outside 1.." +
                          std::to_string(env.days()));
  if (max_today_kg < 0) throw ValidationError("clamp_target: negative max_today");
  double t = std::max(target_kg, env.lower(day) - cumulative_kg);
  t = std::min(t, env.upper(day) - cumulative_kg);
  t = std::min(t, max_today_kg);
  return std::max(0.0, t);
}

}  // namespace h2sched
