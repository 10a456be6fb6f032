#include "h2sched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "h2sched/errors.hpp"

namespace h2sched::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivTol = 1e-9;
constexpr double kFeasTol = 1e-7;

enum class Stat { Basic, AtLower, AtUpper };

struct Tableau {
  int m = 0;                           // rows
  int n = 0;                           // total columns
  std::vector<std::vector<double>> t;  // m x n, kept as B^-1 [A | I | R]
  std::vector<double> lo, up;
  std::vector<double> beta;   // value of the basic variable of each row
  std::vector<int> basic;     // column basic in each row
  std::vector<Stat> stat;
  std::vector<double> xval;   // bound value of each nonbasic column
  std::vector<double> d;      // reduced costs
  long iterations = 0;
  bool bland = false;
  long stall = 0;

  double value(int j) const { return stat[j] == Stat::Basic ? 0.0 : xval[j]; }

  void reduced_costs(const std::vector<double>& cost) {
    d = cost;
    for (int i = 0; i < m; ++i) {
      double cb = cost[basic[i]];
      if (cb == 0.0) continue;
      const std::vector<double>& row = t[i];
      for (int j = 0; j < n; ++j) d[j] -= cb * row[j];
    }
  }

  // One simplex iteration for the given cost vector. Returns false when
  // no improving column is left (optimal for this phase).
  bool step(long max_iters) {
    if (++iterations > max_iters)
      throw SolverError("simplex: iteration cap exceeded (" + std::to_string(max_iters) + ")");
    int enter = -1;
    double best = kCostTol;
    for (int j = 0; j < n; ++j) {
      if (stat[j] == Stat::Basic || lo[j] == up[j]) continue;
      double viol = 0.0;
      if (stat[j] == Stat::AtLower && d[j] < -kCostTol)
        viol = -d[j];
      else if (stat[j] == Stat::AtUpper && d[j] > kCostTol)
        viol = d[j];
      else
        continue;
      if (bland) {  // first eligible index wins
        enter = j;
        break;
      }
      if (viol > best) {
        best = viol;
        enter = j;
      }
    }
    if (enter < 0) return false;

    double sigma = stat[enter] == Stat::AtLower ? 1.0 : -1.0;
    // Ratio test: how far can x[enter] move before something hits a bound.
    double t_best = up[enter] - lo[enter];  // bound flip distance, may be inf
    int leave = -1;
    bool leave_at_upper = false;
    for (int i = 0; i < m; ++i) {
      double alpha = sigma * t[i][enter];
      int bi = basic[i];
      double tt;
      bool at_upper;
      if (alpha > kPivTol) {
        if (lo[bi] == -kInf) continue;
        tt = (beta[i] - lo[bi]) / alpha;
        at_upper = false;
      } else if (alpha < -kPivTol) {
        if (up[bi] == kInf) continue;
        tt = (up[bi] - beta[i]) / (-alpha);
        at_upper = true;
      } else {
        continue;
      }
      if (tt < 0.0) tt = 0.0;  // basic already at (or past) its bound
      bool better;
      if (leave < 0) {
        better = tt < t_best;
      } else if (bland) {
        better = tt < t_best - 1e-12 || (tt <= t_best + 1e-12 && bi < basic[leave]);
      } else {
        // near-ties: prefer the biggest pivot for stability
        better = tt < t_best - 1e-12 ||
                 (tt <= t_best + 1e-12 && std::abs(alpha) > std::abs(sigma * t[leave][enter]));
      }
      if (better) {
        t_best = tt;
        leave = i;
        leave_at_upper = at_upper;
      }
    }
    if (t_best == kInf) throw SolverError("simplex: unbounded direction in phase step");

    if (t_best < 1e-12) {
      if (++stall > 200 && !bland) bland = true;
    } else {
      stall = 0;
    }

    double step_val = sigma * t_best;
    if (leave < 0) {
      // Entering variable runs all the way to its other bound.
      for (int i = 0; i < m; ++i) beta[i] -= step_val * t[i][enter];
      stat[enter] = sigma > 0 ? Stat::AtUpper : Stat::AtLower;
      xval[enter] = sigma > 0 ? up[enter] : lo[enter];
      return true;
    }

    double enter_val = xval[enter] + step_val;
    for (int i = 0; i < m; ++i)
      if (i != leave) beta[i] -= step_val * t[i][enter];
    int out = basic[leave];
    stat[out] = leave_at_upper ? Stat::AtUpper : Stat::AtLower;
    xval[out] = leave_at_upper ? up[out] : lo[out];

    // Gauss-Jordan elimination on the entering column.
    std::vector<double>& prow = t[leave];
    double piv = prow[enter];
    for (int j = 0; j < n; ++j) prow[j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      std::vector<double>& row = t[i];
      for (int j = 0; j < n; ++j) row[j] -= f * prow[j];
    }
    double f = d[enter];
    if (f != 0.0)
      for (int j = 0; j < n; ++j) d[j] -= f * prow[j];

    basic[leave] = enter;
    stat[enter] = Stat::Basic;
    beta[leave] = enter_val;
    return true;
  }
};

}  // namespace

Solution solve(const Problem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int nv = p.num_vars;

  // Initial nonbasic value of a structural variable: the finite bound
  // nearest zero (free variables start at 0).
  auto start_value = [&](int j) {
    if (p.lo[j] > -kInf) return p.lo[j];
    if (p.up[j] < kInf) return p.up[j];
    return 0.0;
  };

  // beta0[i] = slack value when every structural sits at its start value
  std::vector<double> beta0(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double ax = 0.0;
    for (auto [j, a] : p.rows[i].coeffs) ax += a * start_value(j);
    beta0[i] = p.rows[i].rhs - ax;
  }

  // Slack bounds per relation; find rows whose slack start is infeasible.
  std::vector<double> slack_lo(m), slack_up(m);
  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    switch (p.rows[i].rel) {
      case Relation::LessEq: slack_lo[i] = 0.0; slack_up[i] = kInf; break;
      case Relation::GreaterEq: slack_lo[i] = -kInf; slack_up[i] = 0.0; break;
      case Relation::Equal: slack_lo[i] = 0.0; slack_up[i] = 0.0; break;
    }
    if (beta0[i] < slack_lo[i] - kFeasTol || beta0[i] > slack_up[i] + kFeasTol)
      art_of_row[i] = n_art++;
  }

  Tableau tb;
  tb.m = m;
  tb.n = nv + m + n_art;
  tb.t.assign(m, std::vector<double>(tb.n, 0.0));
  tb.lo.assign(tb.n, 0.0);
  tb.up.assign(tb.n, kInf);
  tb.stat.assign(tb.n, Stat::AtLower);
  tb.xval.assign(tb.n, 0.0);
  tb.basic.assign(m, -1);
  tb.beta.assign(m, 0.0);

  for (int j = 0; j < nv; ++j) {
    tb.lo[j] = p.lo[j];
    tb.up[j] = p.up[j];
    tb.xval[j] = start_value(j);
    tb.stat[j] = (tb.xval[j] == p.up[j] && p.up[j] < kInf && p.lo[j] != p.up[j])
                     ? Stat::AtUpper
                     : Stat::AtLower;
  }
  for (int i = 0; i < m; ++i) {
    for (auto [j, a] : p.rows[i].coeffs) tb.t[i][j] += a;
    int sj = nv + i;
    tb.t[i][sj] = 1.0;
    tb.lo[sj] = slack_lo[i];
    tb.up[sj] = slack_up[i];
    if (art_of_row[i] < 0) {
      tb.basic[i] = sj;
      tb.stat[sj] = Stat::Basic;
      tb.beta[i] = beta0[i];
    } else {
      // Park the slack at its nearest bound, let an artificial absorb the
      // residual so the starting basis is feasible.
      double v = std::clamp(beta0[i], slack_lo[i], slack_up[i]);
      tb.stat[sj] = (v == slack_up[i] && slack_up[i] < kInf && slack_lo[i] != slack_up[i])
                        ? Stat::AtUpper
                        : Stat::AtLower;
      tb.xval[sj] = v;
      double resid = beta0[i] - v;
      int aj = nv + m + art_of_row[i];
      tb.t[i][aj] = resid >= 0.0 ? 1.0 : -1.0;
      tb.basic[i] = aj;
      tb.stat[aj] = Stat::Basic;
      tb.beta[i] = std::abs(resid);
    }
  }

  const long max_iters = 5000 + 100L * (m + tb.n);

  if (n_art > 0) {
    std::vector<double> cost1(tb.n, 0.0);
    for (int j = nv + m; j < tb.n; ++j) cost1[j] = 1.0;
    tb.reduced_costs(cost1);
    while (tb.step(max_iters)) {
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (tb.basic[i] >= nv + m) infeas += tb.beta[i];
    for (int j = nv + m; j < tb.n; ++j)
      if (tb.stat[j] != Stat::Basic) infeas += tb.xval[j];
    if (infeas > 1e-6) {
      Solution s;
      s.status = Status::Infeasible;
      return s;
    }
    // Pin artificials at zero; pivot basic ones out where possible.
    for (int j = nv + m; j < tb.n; ++j) {
      if (tb.stat[j] != Stat::Basic) {
        tb.lo[j] = tb.up[j] = 0.0;
        tb.xval[j] = 0.0;
      }
    }
    for (int i = 0; i < m; ++i) {
      int bj = tb.basic[i];
      if (bj < nv + m) continue;
      int piv_col = -1;
      for (int j = 0; j < nv + m; ++j) {
        if (tb.stat[j] == Stat::Basic || tb.lo[j] == tb.up[j]) continue;
        if (std::abs(tb.t[i][j]) > 1e-7) {
          piv_col = j;
          break;
        }
      }
      if (piv_col < 0) {
        // Redundant row; freeze the artificial in the basis at zero.
        tb.lo[bj] = tb.up[bj] = 0.0;
        continue;
      }
      std::vector<double>& prow = tb.t[i];
      double piv = prow[piv_col];
      for (int j = 0; j < tb.n; ++j) prow[j] /= piv;
      for (int k = 0; k < m; ++k) {
        if (k == i) continue;
        double f = tb.t[k][piv_col];
        if (f == 0.0) continue;
        for (int j = 0; j < tb.n; ++j) tb.t[k][j] -= f * prow[j];
      }
      tb.stat[bj] = Stat::AtLower;
      tb.xval[bj] = 0.0;
      tb.lo[bj] = tb.up[bj] = 0.0;
      tb.basic[i] = piv_col;
      tb.stat[piv_col] = Stat::Basic;
      // zero-length step: the entering column keeps its old bound value
      tb.beta[i] = tb.xval[piv_col];
    }
  }

  std::vector<double> cost2(tb.n, 0.0);
  for (int j = 0; j < nv; ++j) cost2[j] = p.c[j];
  tb.bland = false;
  tb.stall = 0;
  tb.reduced_costs(cost2);
  try {
    while (tb.step(max_iters)) {
    }
  } catch (const SolverError& e) {
    if (std::string(e.what()).find("unbounded") != std::string::npos) {
      Solution s;
      s.status = Status::Unbounded;
      return s;
    }
    throw;
  }

  Solution s;
  s.status = Status::Optimal;
  s.x.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) s.x[j] = tb.value(j);
  for (int i = 0; i < m; ++i)
    if (tb.basic[i] < nv) s.x[tb.basic[i]] = tb.beta[i];
  s.objective = 0.0;
  for (int j = 0; j < nv; ++j) s.objective += p.c[j] * s.x[j];
  s.row_duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) s.row_duals[i] = -tb.d[nv + i];
  return s;
}

}  // namespace h2sched::lp
