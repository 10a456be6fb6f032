#pragma once

#include <span>
#include <string>

namespace h2sched {

// Physical plant and contract parameters. Defaults describe the studied
// site: 2 MW wind park feeding a 1 MW electrolyser, 57.6 kWh per kg of
// hydrogen, and an annual purchase agreement of 48 t over 365 days.
struct PlantSpec {
  double wind_capacity_mw = 2.0;
  double electrolyser_capacity_mw = 1.0;
  double specific_energy_mwh_per_kg = 0.0576;
  double hpa_total_kg = 48000.0;
  int hpa_days = 365;
};

// Throws ValidationError if any capacity or the contract is nonsensical.
void validate(const PlantSpec& spec);

// Parse a key = value file ('#' starts a comment). Unknown keys are an
// error so typos do not silently fall back to defaults.
PlantSpec load_plant_config(const std::string& path);
void save_plant_config(const PlantSpec& spec, const std::string& path);

// Wind energy produced in one hour at capacity factor w, in MWh.
double wind_energy(double w, const PlantSpec& spec);

// Most hydrogen the plant can make over one day of 24 capacity factors:
// each hour contributes min(wind, electrolyser cap) / specific energy.
double max_daily_hydrogen(std::span<const double> day_w, const PlantSpec& spec);

// One hour of plant operation. Energies in MWh, masses in kg.
//   g1 wind production, g2 grid sales, g3 electrolyser feed
//   m1 hydrogen made, m2 HPA delivery, m3 market sales
struct HourFlows {
  double g1 = 0, g2 = 0, g3 = 0;
  double m1 = 0, m2 = 0, m3 = 0;
};

// Conservation and capacity check, 1e-9 tolerances; throws ValidationError
// with the offending quantity in the message.
void check_flows(const HourFlows& f, const PlantSpec& spec);

}  // namespace h2sched
