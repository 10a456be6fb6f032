#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace h2sched {

// One contiguous run of hourly data. Columns share an index: hour t has
// electricity price e[t] (EUR/MWh), hydrogen market price h[t] (EUR/kg)
// and wind capacity factor w[t] in [0,1]. The run starts at start_epoch_s
// (UTC) and must cover a whole number of days; full calendar years are
// the production case, short multiples of 24 h appear in tests.
struct HourlySeries {
  std::string year_label;
  std::int64_t start_epoch_s = 0;
  std::vector<double> e;
  std::vector<double> h;
  std::vector<double> w;

  std::size_t hours() const { return e.size(); }
  std::size_t days() const { return e.size() / 24; }
};

// Throws ValidationError on length mismatch, non-multiple-of-24 length,
// capacity factors outside [0,1], or non-finite values.
void validate(const HourlySeries& s);

// CSV with header "timestamp,e_eur_mwh,h_eur_kg,w", hourly ISO-8601
// timestamps in chronological order. load_csv throws FormatError for a
// broken file, OrderingError for out-of-order rows and ValidationError
// for bad values; messages name the offending line. save_csv followed by
// load_csv reproduces the series bit for bit.
HourlySeries load_csv(const std::string& path);
void save_csv(const HourlySeries& s, const std::string& path);

// Synthetic hydrogen price: scale e so its mean hits target_mean_eur_kg,
// perturb each hour by an independent uniform factor in [1-noise, 1+noise]
// and clip into [1, 5] EUR/kg. Deterministic for a given seed. Throws
// ValidationError when mean(e) <= 0 (scaling undefined).
std::vector<double> synth_hydrogen_prices(const std::vector<double>& e,
                                          double target_mean_eur_kg,
                                          std::uint64_t seed,
                                          double noise = 0.25);

// Per-day arithmetic means of each column; day_index counts from 1.
struct DailyMeans {
  int day_index = 0;
  double e = 0, h = 0, w = 0;
};
std::vector<DailyMeans> daily_means(const HourlySeries& s);

}  // namespace h2sched
