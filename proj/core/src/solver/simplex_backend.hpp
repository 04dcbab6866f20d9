#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigbell/solver/conic.hpp"

namespace sigbell::solver::detail {

/// Dense-basis revised simplex for
///   maximize c'x  s.t.  eq/le rows,  x >= 0.
/// Columns are sparse; the basis matrix is refactorized every iteration,
/// which is cheap at the row counts used here and keeps the arithmetic
/// well behaved.
struct LpRow {
  bool is_eq = true;
  double rhs = 0.0;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<double> c;
  std::vector<LpRow> rows;
  // Column-major sparse structure over structural variables.
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, coeff)
};

struct LpResult {
  Status status = Status::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> y;  // row duals: y'b = objective, A'y >= c, y_le >= 0
  double max_residual = 0.0;
  long pivots = 0;
};

LpResult solve_lp_max(const LpProblem& problem, const Settings& settings);

}  // namespace sigbell::solver::detail
