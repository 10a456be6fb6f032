#include "h2sched/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"

namespace h2sched {

void validate(const PlantSpec& spec) {
  if (!(spec.wind_capacity_mw > 0))
    throw ValidationError("plant: wind_capacity_mw must be positive");
  if (!(spec.electrolyser_capacity_mw > 0))
    throw ValidationError("plant: electrolyser_capacity_mw must be positive");
  if (!(spec.specific_energy_mwh_per_kg > 0))
    throw ValidationError("plant: specific_energy_mwh_per_kg must be positive");
  if (spec.hpa_total_kg < 0)
    throw ValidationError("plant: hpa_total_kg must be nonnegative");
  if (spec.hpa_days < 0)
    throw ValidationError("plant: hpa_days must be nonnegative");
}

PlantSpec load_plant_config(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  PlantSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
    key.erase(std::remove_if(key.begin(), key.end(), [](unsigned char c) { return std::isspace(c); }),
              key.end());
    if (key.empty()) continue;
    if (eq == std::string::npos)
      throw FormatError(path + ": line " + std::to_string(lineno) + ": expected key = value");
    std::string val = line.substr(eq + 1);
    val.erase(std::remove_if(val.begin(), val.end(), [](unsigned char c) { return std::isspace(c); }),
              val.end());
    double num = csv::parse_double(val, path, lineno);
    if (key == "wind_capacity_mw") {
      spec.wind_capacity_mw = num;
    } else if (key == "electrolyser_capacity_mw") {
      spec.electrolyser_capacity_mw = num;
    } else if (key == "specific_energy_mwh_per_kg") {
      spec.specific_energy_mwh_per_kg = num;
    } else if (key == "hpa_total_kg") {
      spec.hpa_total_kg = num;
    } else if (key == "hpa_days") {
      spec.hpa_days = static_cast<int>(num);
      if (spec.hpa_days != num)
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": hpa_days must be an integer");
    } else {
      throw FormatError(path + ": line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  validate(spec);
  return spec;
}

void save_plant_config(const PlantSpec& spec, const std::string& path) {
  std::string out;
  out += "wind_capacity_mw = " + csv::format_double(spec.wind_capacity_mw) + "\n";
  out += "electrolyser_capacity_mw = " + csv::format_double(spec.electrolyser_capacity_mw) + "\n";
  out += "specific_energy_mwh_per_kg = " + csv::format_double(spec.specific_energy_mwh_per_kg) + "\n";
  out += "hpa_total_kg = " + csv::format_double(spec.hpa_total_kg) + "\n";
  out += "hpa_days = " + std::to_string(spec.hpa_days) + "\n";
  csv::write_file(path, out);
}

double wind_energy(double w, const PlantSpec& spec) {
  if (!(w >= 0.0 && w <= 1.0))
    throw ValidationError("wind_energy: capacity factor " + csv::format_double(w) +
                          " outside [0,1]");
  return w * spec.wind_capacity_mw;
}

double max_daily_hydrogen(std::span<const double> day_w, const PlantSpec& spec) {
  if (day_w.size() != 24)
    throw ValidationError("max_daily_hydrogen: expected 24 capacity factors, got " +
                          std::to_string(day_w.size()));
  double kg = 0.0;
  for (double w : day_w) {
    double to_electrolyser = std::min(wind_energy(w, spec), spec.electrolyser_capacity_mw);
    kg += to_electrolyser / spec.specific_energy_mwh_per_kg;
  }
  return kg;
}

namespace {

void check_close(const char* what, double got, double want) {
  if (std::abs(got - want) > 1e-9)
    throw ValidationError(std::string("flows: ") + what + ": " + csv::format_double(got) +
                          " vs " + csv::format_double(want));
}

void check_nonneg(const char* what, double v) {
  if (v < -1e-9)
    throw ValidationError(std::string("flows: ") + what + " negative: " + csv::format_double(v));
}

}  // namespace

void check_flows(const HourFlows& f, const PlantSpec& spec) {
  check_nonneg("g1", f.g1);
  check_nonneg("g2", f.g2);
  check_nonneg("g3", f.g3);
  check_nonneg("m1", f.m1);
  check_nonneg("m2", f.m2);
  check_nonneg("m3", f.m3);
  check_close("g1 = g2 + g3", f.g2 + f.g3, f.g1);
  check_close("m1 = g3 / specific energy", f.m1, f.g3 / spec.specific_energy_mwh_per_kg);
  check_close("m1 = m2 + m3", f.m2 + f.m3, f.m1);
  if (f.g3 > spec.electrolyser_capacity_mw + 1e-9)
    throw ValidationError("flows: g3 " + csv::format_double(f.g3) +
                          " above electrolyser capacity " +
                          csv::format_double(spec.electrolyser_capacity_mw));
  if (f.g1 > spec.wind_capacity_mw + 1e-9)
    throw ValidationError("flows: g1 " + csv::format_double(f.g1) + " above wind capacity " +
                          csv::format_double(spec.wind_capacity_mw));
}

}  // namespace h2sched
