#include "h2sched/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"
#include "h2sched/simplex.hpp"

namespace h2sched {

namespace {

// Absolute tolerance for price comparisons around the bisected multiplier.
// The bisection interval shrinks to 1e-12, far below this, so every hour
// sitting exactly on a threshold is recognised as marginal.
constexpr double kPriceTol = 1e-7;
constexpr double kKgTol = 1e-6;

void validate_problem(const DispatchProblem& p) {
  validate(p.spec);
  if (p.h.size() != p.e.size() || p.w.size() != p.e.size())
    throw ValidationError("dispatch: column lengths differ");
  if (p.e.empty()) throw ValidationError("dispatch: empty horizon");
  if (!(p.hpa_min_kg >= 0.0))
    throw ValidationError("dispatch: hpa_min_kg must be nonnegative");
  for (std::size_t t = 0; t < p.e.size(); ++t) {
    if (!std::isfinite(p.e[t]) || !std::isfinite(p.h[t]) || !std::isfinite(p.w[t]))
      throw ValidationError("dispatch: non-finite price or wind at hour " + std::to_string(t));
    if (p.w[t] < 0.0 || p.w[t] > 1.0)
      throw ValidationError("dispatch: capacity factor outside [0,1] at hour " +
                            std::to_string(t));
  }
}

// Electrolyser feed limit per hour, MWh.
std::vector<double> hour_caps(const DispatchProblem& p) {
  std::vector<double> caps(p.horizon());
  for (std::size_t t = 0; t < p.horizon(); ++t)
    caps[t] = std::min(wind_energy(p.w[t], p.spec), p.spec.electrolyser_capacity_mw);
  return caps;
}

struct Allocation {
  std::vector<HourFlows> flows;
  double base_kg = 0.0;      // HPA deliveries fixed by strict comparisons
  double marginal_kg = 0.0;  // additional deliveries available from tie hours
  std::vector<std::pair<std::size_t, bool>> marginal;  // hour, g3 already at cap
};

// Closed-form per-hour decisions for a fixed multiplier lambda. A kg of
// hydrogen is worth max(h_t, lambda): the market, or the constraint via
// its shadow price (over-delivery beyond the floor is free disposal at
// price zero, which max(h, lambda>=0) also covers). Energy goes to the
// electrolyser when that beats the grid price; hydrogen goes to the HPA
// when lambda strictly beats the market. Hours within kPriceTol of either
// threshold are collected as marginal so the caller can ration them.
Allocation allocate(const DispatchProblem& p, const std::vector<double>& caps, double lambda) {
  const double se = p.spec.specific_energy_mwh_per_kg;
  Allocation a;
  a.flows.resize(p.horizon());
  for (std::size_t t = 0; t < p.horizon(); ++t) {
    HourFlows& f = a.flows[t];
    f.g1 = wind_energy(p.w[t], p.spec);
    double hv = std::max(p.h[t], lambda);
    double v = hv / se - p.e[t];  // net value of electrolyser energy, EUR/MWh
    if (v > kPriceTol) {
      f.g3 = caps[t];
      if (lambda - p.h[t] > kPriceTol) {
        f.m2 = f.g3 / se;
        a.base_kg += f.m2;
      } else if (p.h[t] - lambda > kPriceTol) {
        f.m2 = 0.0;
      } else {
        a.marginal.emplace_back(t, true);
        a.marginal_kg += f.g3 / se;
      }
    } else if (v >= -kPriceTol && caps[t] > 0.0) {
      if (lambda >= p.h[t] - kPriceTol) {
        // Worth feeding the electrolyser only if the HPA needs the kg.
        a.marginal.emplace_back(t, false);
        a.marginal_kg += caps[t] / se;
      } else {
        // Revenue tie between grid and hydrogen market; prefer hydrogen.
        f.g3 = caps[t];
        f.m2 = 0.0;
      }
    }
    f.m1 = f.g3 / se;
    f.m3 = f.m1 - f.m2;
    f.g2 = f.g1 - f.g3;
  }
  return a;
}

double ration_and_finish(const DispatchProblem& p, Allocation& a, double need_kg) {
  const double se = p.spec.specific_energy_mwh_per_kg;
  double delivered = a.base_kg;
  double r = need_kg - a.base_kg;
  if (r > 0.0 && a.marginal_kg > 0.0) {
    double scale = std::min(1.0, r / a.marginal_kg);
    for (auto [t, at_cap] : a.marginal) {
      HourFlows& f = a.flows[t];
      double cap_kg = (at_cap ? f.g3 : std::min(wind_energy(p.w[t], p.spec),
                                                p.spec.electrolyser_capacity_mw)) /
                      se;
      f.m2 = scale * cap_kg;
      if (!at_cap) f.g3 = f.m2 * se;
      f.m1 = f.g3 / se;
      f.m3 = f.m1 - f.m2;
      f.g2 = f.g1 - f.g3;
      delivered += f.m2;
    }
  }
  return delivered;
}

double revenue_of(const DispatchProblem& p, const std::vector<HourFlows>& flows) {
  double rev = 0.0;
  for (std::size_t t = 0; t < flows.size(); ++t)
    rev += p.e[t] * flows[t].g2 + p.h[t] * flows[t].m3;
  return rev;
}

}  // namespace

double max_attainable_kg(const DispatchProblem& p) {
  validate_problem(p);
  auto caps = hour_caps(p);
  double total = 0.0;
  for (double c : caps) total += c / p.spec.specific_energy_mwh_per_kg;
  return total;
}

DispatchSolution solve(const DispatchProblem& p) {
  validate_problem(p);
  const auto caps = hour_caps(p);
  const double se = p.spec.specific_energy_mwh_per_kg;
  double attain = 0.0;
  for (double c : caps) attain += c / se;
  if (p.hpa_min_kg > attain + kKgTol)
    throw InfeasibleError("dispatch: hpa_min " + csv::format_double(p.hpa_min_kg) +
                              " kg exceeds attainable " + csv::format_double(attain) + " kg",
                          attain);
  const double need = std::min(p.hpa_min_kg, attain);

  auto max_delivery = [&](double lambda) {
    Allocation a = allocate(p, caps, lambda);
    return a.base_kg + a.marginal_kg;
  };

  double lambda = 0.0;
  if (max_delivery(0.0) < need) {
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t t = 0; t < p.horizon(); ++t)
      hi = std::max(hi, std::max(p.h[t], se * p.e[t]) + 1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      double mid = 0.5 * (lo + hi);
      if (max_delivery(mid) >= need)
        hi = mid;
      else
        lo = mid;
    }
    lambda = hi;
  }

  Allocation a = allocate(p, caps, lambda);
  double delivered = ration_and_finish(p, a, need);

  DispatchSolution sol;
  sol.flows = std::move(a.flows);
  sol.revenue_eur = revenue_of(p, sol.flows);
  sol.hpa_delivered_kg = delivered;
  sol.dual_price_eur_per_kg = delivered > p.hpa_min_kg + kKgTol ? 0.0 : lambda;
  return sol;
}

DispatchSolution solve_annual_benchmark(const HourlySeries& s, const PlantSpec& spec) {
  validate(s);
  DispatchProblem p;
  p.e = s.e;
  p.h = s.h;
  p.w = s.w;
  p.hpa_min_kg = spec.hpa_total_kg;
  p.spec = spec;
  return solve(p);
}

DispatchSolution lp_oracle(const DispatchProblem& p) {
  validate_problem(p);
  const auto caps = hour_caps(p);
  const double se = p.spec.specific_energy_mwh_per_kg;
  const std::size_t T = p.horizon();

  // Variables per hour: x[2t] = g3_t in [0, cap_t], x[2t+1] = m2_t >= 0.
  // The remaining flows are fixed by the balances and reconstructed after
  // the solve. Minimising the negated sales revenue of the free decisions:
  // g3 earns h/se - e per MWh, a kg moved from market to HPA forfeits h.
  lp::Problem lp;
  lp.num_vars = static_cast<int>(2 * T);
  lp.c.resize(lp.num_vars);
  lp.lo.assign(lp.num_vars, 0.0);
  lp.up.resize(lp.num_vars);
  for (std::size_t t = 0; t < T; ++t) {
    lp.c[2 * t] = -(p.h[t] / se - p.e[t]);
    lp.c[2 * t + 1] = p.h[t];
    lp.up[2 * t] = caps[t];
    lp.up[2 * t + 1] = std::numeric_limits<double>::infinity();
  }
  lp.rows.reserve(T + 1);
  for (std::size_t t = 0; t < T; ++t) {
    lp::Problem::Row row;
    row.coeffs = {{static_cast<int>(2 * t), -1.0}, {static_cast<int>(2 * t + 1), se}};
    row.rel = lp::Relation::LessEq;
    row.rhs = 0.0;
    lp.rows.push_back(std::move(row));
  }
  {
    lp::Problem::Row hpa;
    hpa.coeffs.reserve(T);
    for (std::size_t t = 0; t < T; ++t)
      hpa.coeffs.emplace_back(static_cast<int>(2 * t + 1), 1.0);
    hpa.rel = lp::Relation::GreaterEq;
    hpa.rhs = p.hpa_min_kg;
    lp.rows.push_back(std::move(hpa));
  }

  lp::Solution ls = lp::solve(lp);
  if (ls.status == lp::Status::Infeasible) {
    double attain = 0.0;
    for (double c : caps) attain += c / se;
    throw InfeasibleError("lp_oracle: hpa_min " + csv::format_double(p.hpa_min_kg) +
                              " kg exceeds attainable " + csv::format_double(attain) + " kg",
                          attain);
  }
  if (ls.status != lp::Status::Optimal)
    throw SolverError("lp_oracle: unexpected simplex status");

  DispatchSolution sol;
  sol.flows.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    HourFlows& f = sol.flows[t];
    f.g1 = wind_energy(p.w[t], p.spec);
    f.g3 = ls.x[2 * t];
    f.m2 = ls.x[2 * t + 1];
    f.g2 = f.g1 - f.g3;
    f.m1 = f.g3 / se;
    f.m3 = f.m1 - f.m2;
    sol.hpa_delivered_kg += f.m2;
  }
  sol.revenue_eur = revenue_of(p, sol.flows);
  sol.dual_price_eur_per_kg = std::max(0.0, ls.row_duals.back());
  return sol;
}

void write_solution_csv(const DispatchSolution& sol, const std::string& path) {
  std::string out = "hour,g1,g2,g3,m1,m2,m3\n";
  out.reserve(out.size() + sol.flows.size() * 64);
  for (std::size_t t = 0; t < sol.flows.size(); ++t) {
    const HourFlows& f = sol.flows[t];
    out += std::to_string(t);
    for (double v : {f.g1, f.g2, f.g3, f.m1, f.m2, f.m3}) {
      out += ',';
      out += csv::format_double(v);
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

}  // namespace h2sched
