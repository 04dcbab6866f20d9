#include "sigbell/discrimination.hpp"

#include <cmath>

namespace sigbell {

namespace {

void validate_states(const std::vector<Matrix>& states) {
  if (states.size() < 2) throw InvalidArgs("discrimination needs at least two states");
  const int dim = static_cast<int>(states.front().rows());
  if (dim < 1 || dim > kMaxDim) throw InvalidArgs("state dimension out of range");
  for (const Matrix& rho : states) {
    if (rho.rows() != dim || rho.cols() != dim)
      throw DimensionMismatch("states must share one dimension");
    require_hermitian(rho, 1e-9);
    if (min_eigenvalue(rho) < -kPsdTol) throw NotPSD("state is not positive semidefinite");
    if (std::abs(rho.real().trace() - 1.0) > 1e-6)
      throw InvalidArgs("states must have unit trace");
  }
}

}  // namespace

GuessingResult guessing_probability(const std::vector<Matrix>& states,
                                    const solver::Settings& settings) {
  validate_states(states);
  const int m = static_cast<int>(states.size());
  const int dim = static_cast<int>(states.front().rows());
  const double inv_m = 1.0 / static_cast<double>(m);

  GuessingResult result;

  // Primal: max (1/m) sum tr(N_x sigma_x) over POVMs.  The last element is
  // eliminated as I - sum of the others, entering through a PSD constraint.
  double primal_value = 0.0;
  {
    solver::ConicProblem problem;
    std::vector<solver::MatVar> n_ops;
    for (int x = 0; x + 1 < m; ++x) n_ops.push_back(problem.add_psd(dim));

    solver::MatExpr last(dim);
    last.add_constant(Matrix::Identity(dim, dim));
    for (auto& op : n_ops) last.add(op, -1.0);
    problem.add_psd(last);

    solver::ScalarExpr objective(inv_m * states.back().real().trace());
    for (int x = 0; x + 1 < m; ++x) {
      objective.add_trace(n_ops[x], inv_m * (states[x] - states.back()));
    }
    problem.set_objective(solver::Sense::Maximize, objective);

    const solver::Report report = problem.solve(settings);
    if (report.status != solver::Status::Optimal)
      throw SolverFailure("guessing probability primal: " + solver::to_string(report.status));
    primal_value = report.objective;
    result.povm.resize(m);
    Matrix sum = Matrix::Zero(dim, dim);
    for (int x = 0; x + 1 < m; ++x) {
      result.povm[x] = report.matrices[n_ops[x].id];
      sum += result.povm[x];
    }
    result.povm[m - 1] = Matrix::Identity(dim, dim) - sum;
  }

  // Dual: min tr(Z) s.t. Z >= sigma_x / m.
  double dual_value = 0.0;
  {
    solver::ConicProblem problem;
    solver::MatVar z = problem.add_hermitian(dim);
    for (int x = 0; x < m; ++x) {
      solver::MatExpr expr(dim);
      expr.add(z, 1.0);
      expr.add_constant(-inv_m * states[x]);
      problem.add_psd(expr);
    }
    solver::ScalarExpr objective;
    objective.add_trace(z, Matrix::Identity(dim, dim));
    problem.set_objective(solver::Sense::Minimize, objective);

    const solver::Report report = problem.solve(settings);
    if (report.status != solver::Status::Optimal)
      throw SolverFailure("guessing probability dual: " + solver::to_string(report.status));
    dual_value = report.objective;
    result.dual_z = report.matrices[z.id];
  }

  result.gap = std::abs(primal_value - dual_value);
  if (result.gap > 1e-5)
    throw SolverFailure("guessing probability primal-dual gap " + std::to_string(result.gap));
  result.pg = 0.5 * (primal_value + dual_value);
  result.status = solver::Status::Optimal;
  return result;
}

double helstrom(const Matrix& rho1, const Matrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
    throw DimensionMismatch("helstrom states must share one dimension");
  return 0.5 + 0.5 * trace_norm(0.5 * rho1 - 0.5 * rho2);
}

double gamma_from_assemblage(const Assemblage& assemblage, const solver::Settings& settings) {
  assemblage.validate();
  const std::vector<Matrix> mus = assemblage.reduced_states();
  if (mus.size() == 2) return helstrom(mus[0], mus[1]);
  return guessing_probability(mus, settings).pg;
}

}  // namespace sigbell
