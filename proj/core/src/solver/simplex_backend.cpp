#include "solver/simplex_backend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigbell::solver::detail {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr long kDegenerateLimit = 2000;  // pivots without progress before Bland's rule

struct Tableau {
  int m = 0;         // rows
  int n_total = 0;   // structural + slack columns
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> b;          // nonnegative after row scaling
  std::vector<double> row_scale;  // +-1
  std::vector<int> basis;         // column per row; >= n_total encodes the artificial of that row

  bool is_artificial(int col) const { return col >= n_total; }
  int artificial_row(int col) const { return col - n_total; }

  void column_into(int col, Eigen::VectorXd& out) const {
    out.setZero(m);
    if (is_artificial(col)) {
      out[artificial_row(col)] = 1.0;
      return;
    }
    for (const auto& [row, val] : cols[col]) out[row] += val * row_scale[row];
  }

  double dot_with_column(const Eigen::VectorXd& y, int col) const {
    double s = 0.0;
    for (const auto& [row, val] : cols[col]) s += y[row] * val * row_scale[row];
    return s;
  }
};

struct PhaseOutcome {
  Status status = Status::NumericalFailure;
  Eigen::VectorXd y;
  long pivots = 0;
};

// Maximizes obj over the current basis, mutating basis/xb in place.
// Artificial columns never enter; artificial basics stuck at zero leave at
// the first opportunity. art_cost is the artificials' objective value (-1
// in phase 1, 0 in phase 2).
PhaseOutcome run_simplex(Tableau& t, const std::vector<double>& obj, double art_cost,
                         Eigen::VectorXd& xb, long pivot_budget) {
  PhaseOutcome out;
  const int m = t.m;
  Eigen::MatrixXd basis_mat(m, m);
  Eigen::VectorXd col(m), direction(m), cb(m), y(m);
  bool bland = false;
  long degenerate_run = 0;

  for (long iter = 0; iter < pivot_budget; ++iter) {
    for (int i = 0; i < m; ++i) {
      t.column_into(t.basis[i], col);
      basis_mat.col(i) = col;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);

    for (int i = 0; i < m; ++i)
      cb[i] = t.is_artificial(t.basis[i]) ? art_cost : obj[t.basis[i]];
    y = lu.transpose().solve(cb);

    int entering = -1;
    double best = kPivotTol;
    for (int j = 0; j < t.n_total; ++j) {
      const double rc = obj[j] - t.dot_with_column(y, j);
      if (rc > best) {
        entering = j;
        if (bland) break;
        best = rc;
      }
    }
    if (entering < 0) {
      out.status = Status::Optimal;
      out.y = y;
      out.pivots = iter;
      return out;
    }

    t.column_into(entering, col);
    direction = lu.solve(col);

    // Ratio test; artificials at zero leave first so they cannot grow back.
    int leave = -1;
    double step = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t.is_artificial(t.basis[i]) && xb[i] <= kFeasTol && std::abs(direction[i]) > kPivotTol) {
        leave = i;
        step = 0.0;
        break;
      }
    }
    if (leave < 0) {
      for (int i = 0; i < m; ++i) {
        if (direction[i] <= kPivotTol) continue;
        const double ratio = std::max(xb[i], 0.0) / direction[i];
        if (ratio < step - 1e-12 ||
            (ratio < step + 1e-12 && leave >= 0 &&
             std::abs(direction[i]) > std::abs(direction[leave]))) {
          step = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      out.status = Status::Unbounded;
      out.y = y;
      out.pivots = iter;
      return out;
    }

    if (step <= kFeasTol) {
      if (++degenerate_run > kDegenerateLimit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    xb -= step * direction;
    xb[leave] = step;
    for (int i = 0; i < m; ++i)
      if (i != leave && xb[i] < 0.0 && xb[i] > -kFeasTol) xb[i] = 0.0;
    t.basis[leave] = entering;
    out.pivots = iter + 1;
  }
  out.status = Status::NumericalFailure;
  return out;
}

}  // namespace

LpResult solve_lp_max(const LpProblem& problem, const Settings& settings) {
  LpResult result;
  const int m = static_cast<int>(problem.rows.size());
  const int n_struct = problem.num_vars;

  Tableau t;
  t.m = m;
  t.cols = problem.cols;
  t.row_scale.assign(m, 1.0);
  t.b.resize(m);

  std::vector<int> slack_of_row(m, -1);
  for (int i = 0; i < m; ++i)
    if (!problem.rows[i].is_eq) {
      slack_of_row[i] = static_cast<int>(t.cols.size());
      t.cols.push_back({{i, 1.0}});
    }
  t.n_total = static_cast<int>(t.cols.size());

  for (int i = 0; i < m; ++i) {
    const double rhs = problem.rows[i].rhs;
    t.row_scale[i] = rhs < 0.0 ? -1.0 : 1.0;
    t.b[i] = std::abs(rhs);
  }

  std::vector<double> obj(t.n_total, 0.0);
  for (int j = 0; j < n_struct; ++j) obj[j] = problem.c[j];

  // Start from the all-artificial basis, except where a slack can serve
  // directly (inequality rows with nonnegative right-hand side).
  t.basis.resize(m);
  for (int i = 0; i < m; ++i)
    t.basis[i] =
        (slack_of_row[i] >= 0 && t.row_scale[i] > 0.0) ? slack_of_row[i] : t.n_total + i;

  Eigen::VectorXd xb = Eigen::Map<const Eigen::VectorXd>(t.b.data(), m);

  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (t.is_artificial(t.basis[i])) need_phase1 = true;

  if (need_phase1) {
    const std::vector<double> zero_obj(t.n_total, 0.0);
    PhaseOutcome p1 = run_simplex(t, zero_obj, -1.0, xb, settings.max_pivots);
    result.pivots = p1.pivots;
    if (p1.status == Status::NumericalFailure) {
      result.status = Status::NumericalFailure;
      return result;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.is_artificial(t.basis[i])) infeasibility += std::max(xb[i], 0.0);
    if (infeasibility > 1e-7) {
      result.status = Status::Infeasible;
      result.objective = -infeasibility;
      result.y.assign(m, 0.0);
      for (int i = 0; i < m; ++i) result.y[i] = p1.y[i] * t.row_scale[i];
      return result;
    }
  }

  PhaseOutcome p2 = run_simplex(t, obj, 0.0, xb, settings.max_pivots);
  result.pivots += p2.pivots;
  if (p2.status != Status::Optimal) {
    result.status = p2.status;
    return result;
  }

  result.status = Status::Optimal;
  std::vector<double> full(t.n_total, 0.0);
  for (int i = 0; i < m; ++i)
    if (!t.is_artificial(t.basis[i])) full[t.basis[i]] = std::max(xb[i], 0.0);
  result.x.assign(full.begin(), full.begin() + n_struct);

  double objective = 0.0;
  for (int j = 0; j < n_struct; ++j) objective += problem.c[j] * result.x[j];
  result.objective = objective;

  result.y.assign(m, 0.0);
  for (int i = 0; i < m; ++i) result.y[i] = p2.y[i] * t.row_scale[i];

  std::vector<double> row_activity(m, 0.0);
  for (int j = 0; j < n_struct; ++j) {
    if (result.x[j] == 0.0) continue;
    for (const auto& [row, val] : problem.cols[j]) row_activity[row] += val * result.x[j];
  }
  double max_resid = 0.0;
  for (int i = 0; i < m; ++i) {
    const double gap = row_activity[i] - problem.rows[i].rhs;
    max_resid = std::max(max_resid, problem.rows[i].is_eq ? std::abs(gap) : gap);
  }
  result.max_residual = std::max(max_resid, 0.0);
  return result;
}

}  // namespace sigbell::solver::detail
