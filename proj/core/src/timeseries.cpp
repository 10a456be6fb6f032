#include "h2sched/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"

namespace h2sched {

void validate(const HourlySeries& s) {
  if (s.h.size() != s.e.size() || s.w.size() != s.e.size())
    throw ValidationError("series '" + s.year_label + "': column lengths differ (e " +
                          std::to_string(s.e.size()) + ", h " + std::to_string(s.h.size()) +
                          ", w " + std::to_string(s.w.size()) + ")");
  if (s.e.empty() || s.e.size() % 24 != 0)
    throw ValidationError("series '" + s.year_label + "': " + std::to_string(s.e.size()) +
                          " hours is not a positive multiple of 24");
  for (std::size_t t = 0; t < s.e.size(); ++t) {
    if (!std::isfinite(s.e[t]) || !std::isfinite(s.h[t]) || !std::isfinite(s.w[t]))
      throw ValidationError("series '" + s.year_label + "': non-finite value at hour " +
                            std::to_string(t));
    if (s.w[t] < 0.0 || s.w[t] > 1.0)
      throw ValidationError("series '" + s.year_label + "': capacity factor " +
                            csv::format_double(s.w[t]) + " outside [0,1] at hour " +
                            std::to_string(t));
  }
}

HourlySeries load_csv(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,e_eur_mwh,h_eur_kg,w")
    throw FormatError(path + ": expected header 'timestamp,e_eur_mwh,h_eur_kg,w', got '" +
                      line + "'");

  HourlySeries s;
  int lineno = 1;
  std::int64_t prev_epoch = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 4)
      throw FormatError(path + ": line " + std::to_string(lineno) + ": expected 4 columns, got " +
                        std::to_string(fields.size()));
    std::int64_t epoch = csv::parse_timestamp(fields[0], path, lineno);
    if (s.e.empty()) {
      s.start_epoch_s = epoch;
      s.year_label = std::string(fields[0].substr(0, 4));
    } else if (epoch <= prev_epoch) {
      throw OrderingError(path + ": line " + std::to_string(lineno) +
                          ": timestamp not after previous row");
    } else if (epoch != prev_epoch + 3600) {
      throw OrderingError(path + ": line " + std::to_string(lineno) +
                          ": gap in hourly sequence (expected " +
                          csv::format_timestamp(prev_epoch + 3600) + ")");
    }
    prev_epoch = epoch;
    s.e.push_back(csv::parse_double(fields[1], path, lineno));
    s.h.push_back(csv::parse_double(fields[2], path, lineno));
    double w = csv::parse_double(fields[3], path, lineno);
    if (w < 0.0 || w > 1.0)
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": capacity factor " +
                            csv::format_double(w) + " outside [0,1]");
    s.w.push_back(w);
  }
  validate(s);
  return s;
}

void save_csv(const HourlySeries& s, const std::string& path) {
  validate(s);
  std::string out = "timestamp,e_eur_mwh,h_eur_kg,w\n";
  out.reserve(out.size() + s.hours() * 48);
  for (std::size_t t = 0; t < s.hours(); ++t) {
    out += csv::format_timestamp(s.start_epoch_s + static_cast<std::int64_t>(t) * 3600);
    out += ',';
    out += csv::format_double(s.e[t]);
    out += ',';
    out += csv::format_double(s.h[t]);
    out += ',';
    out += csv::format_double(s.w[t]);
    out += '\n';
  }
  csv::write_file(path, out);
}

std::vector<double> synth_hydrogen_prices(const std::vector<double>& e,
                                          double target_mean_eur_kg, std::uint64_t seed,
                                          double noise) {
  if (e.empty()) throw ValidationError("synth_hydrogen_prices: empty price series");
  if (noise < 0.0 || noise >= 1.0)
    throw ValidationError("synth_hydrogen_prices: noise fraction outside [0,1)");
  double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
  if (!(mean > 0.0))
    throw ValidationError("synth_hydrogen_prices: mean electricity price " +
                          csv::format_double(mean) + " is not positive, scaling undefined");
  double scale = target_mean_eur_kg / mean;

  std::mt19937_64 rng(seed);
  std::vector<double> h(e.size());
  for (std::size_t t = 0; t < e.size(); ++t) {
    // uniform in [0,1) from the top 53 bits, identical on every platform
    double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double u = noise * (2.0 * u01 - 1.0);
    h[t] = std::clamp(scale * e[t] * (1.0 + u), 1.0, 5.0);
  }
  return h;
}

std::vector<DailyMeans> daily_means(const HourlySeries& s) {
  validate(s);
  std::vector<DailyMeans> out(s.days());
  for (std::size_t d = 0; d < s.days(); ++d) {
    DailyMeans& m = out[d];
    m.day_index = static_cast<int>(d) + 1;
    for (std::size_t k = d * 24; k < (d + 1) * 24; ++k) {
      m.e += s.e[k];
      m.h += s.h[k];
      m.w += s.w[k];
    }
    m.e /= 24.0;
    m.h /= 24.0;
    m.w /= 24.0;
  }
  return out;
}

}  // namespace h2sched
