#pragma once

#include <utility>
#include <vector>

namespace h2sched::lp {

enum class Relation { LessEq, GreaterEq, Equal };

enum class Status { Optimal, Infeasible, Unbounded };

// Generic linear program: minimize c'x subject to row constraints and
// per-variable bounds. Rows store sparse coefficients; everything else
// about the solver is dense.
struct Problem {
  int num_vars = 0;
  std::vector<double> c;
  std::vector<double> lo;  // may be -inf
  std::vector<double> up;  // may be +inf
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
  };
  std::vector<Row> rows;
};

struct Solution {
  Status status = Status::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  // Dual value per input row (sign convention: objective increases by
  // row_duals[i] per unit increase of rhs[i]).
  std::vector<double> row_duals;
};

// Two-phase primal simplex on the full dense tableau, with nonbasic
// variables allowed to sit at either bound. Dantzig pricing, falling back
// to Bland's rule after a long degenerate stall so cycling cannot hang
// the solver. Intended for verification problems of a few hundred rows;
// throws SolverError if the iteration cap is hit.
Solution solve(const Problem& p);

}  // namespace h2sched::lp
