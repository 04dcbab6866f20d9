#include "sigbell/slhs.hpp"

#include <algorithm>
#include <cmath>

#include "sigbell/discrimination.hpp"

namespace sigbell::slhs {

namespace {

constexpr double kMembershipTol = 1e-7;
// Width allowed between the certified upper and lower bounds on gamma_min.
// Full-rank assemblages close the sandwich to solver precision; boundary
// (rank-deficient) ones stall their dual multipliers and settle a few 1e-5
// apart, which is still far below any decision margin used here.
constexpr double kSandwichTol = 5e-4;

void check_gamma(int m_a, double gamma) {
  if (gamma < 1.0 / m_a - 1e-9 || gamma > 1.0 + 1e-9)
    throw InvalidGamma("gamma must lie in [1/mA, 1], got " + std::to_string(gamma));
}

// Module defaults: feasibility 1e-8, gap 1e-7. Tighter gap requests are
// lifted to what these hidden-state programs can reliably certify.
solver::Settings module_settings(solver::Settings s) {
  s.gap_tol = std::max(s.gap_tol, 1e-7);
  return s;
}

struct ModelVars {
  std::vector<solver::MatVar> hidden;  // [lambda][x] flattened lambda*mA + x
  std::vector<solver::MatVar> z_ops;   // [lambda]
  std::vector<std::vector<int>> responses;
};

// Shared constraint block: hidden states and their guessing-probability
// certificates. Z_lambda >= sigma~[lambda,x]/mA for all x, equal traces of
// sigma~[lambda,x] across x.
ModelVars add_model(solver::ConicProblem& problem, int m_a, int n_a, int dim) {
  ModelVars vars;
  vars.responses = enumerate_response_functions(m_a, n_a);
  const std::size_t L = vars.responses.size();
  for (std::size_t l = 0; l < L; ++l)
    for (int x = 0; x < m_a; ++x) vars.hidden.push_back(problem.add_psd(dim));
  for (std::size_t l = 0; l < L; ++l) vars.z_ops.push_back(problem.add_psd(dim));

  const double inv_m = 1.0 / static_cast<double>(m_a);
  for (std::size_t l = 0; l < L; ++l) {
    for (int x = 0; x < m_a; ++x) {
      solver::MatExpr expr(dim);
      expr.add(vars.z_ops[l], 1.0);
      expr.add(vars.hidden[l * m_a + x], -inv_m);
      problem.add_psd(expr);
    }
    for (int x = 1; x < m_a; ++x) {
      solver::ScalarExpr trace_eq;
      trace_eq.add_trace_identity(vars.hidden[l * m_a + x], 1.0);
      trace_eq.add_trace_identity(vars.hidden[l * m_a], -1.0);
      problem.add_eq(trace_eq, 0.0);
    }
  }
  return vars;
}

// The reconstructed member sigma~ -> sum over responses hitting (a,x).
solver::MatExpr member_expr(const ModelVars& vars, int a, int x, int m_a, int dim) {
  solver::MatExpr expr(dim);
  for (std::size_t l = 0; l < vars.responses.size(); ++l)
    if (vars.responses[l][x] == a) expr.add(vars.hidden[l * m_a + x], 1.0);
  return expr;
}

solver::ScalarExpr total_z_trace(const ModelVars& vars) {
  solver::ScalarExpr expr;
  for (const auto& z : vars.z_ops) expr.add_trace_identity(z, 1.0);
  return expr;
}

void fill_certificate(SlhsCertificate& cert, const ModelVars& vars,
                      const solver::Report& report, int m_a, double scale) {
  const std::size_t L = vars.responses.size();
  cert.hidden.resize(L * m_a);
  for (std::size_t i = 0; i < vars.hidden.size(); ++i)
    cert.hidden[i] = scale * report.matrices[vars.hidden[i].id];
  cert.z_ops.resize(L);
  for (std::size_t l = 0; l < L; ++l)
    cert.z_ops[l] = scale * report.matrices[vars.z_ops[l].id];
  cert.p_lambda.resize(L);
  for (std::size_t l = 0; l < L; ++l)
    cert.p_lambda[l] = cert.hidden[l * m_a].real().trace();
}

}  // namespace

std::vector<std::vector<int>> enumerate_response_functions(int m_a, int n_a,
                                                           std::uint64_t cap) {
  if (m_a < 1 || n_a < 1) throw InvalidArgs("response functions need positive dimensions");
  std::uint64_t count = 1;
  for (int x = 0; x < m_a; ++x) {
    if (count > cap / static_cast<std::uint64_t>(n_a) + 1) count = cap + 1;
    if (count <= cap) count *= static_cast<std::uint64_t>(n_a);
    if (count > cap)
      throw TooLarge("response-function space exceeds the cap of " + std::to_string(cap));
  }
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<int> f(m_a);
    std::uint64_t rest = code;
    for (int x = 0; x < m_a; ++x) {
      f[x] = static_cast<int>(rest % n_a);
      rest /= n_a;
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

// Explicit dual of the minimal-gamma program:
//   max sum tr(F[a|x] sigma[a|x])
//   s.t. sum_x Y[l,x] <= I,  Y[l,x] >= 0,
//        Y[l,x]/mA >= F[l(x)|x] + t[l,x] I,  sum_x t[l,x] = 0.
// Any feasible point bounds every member: sum tr(F sigma') <= gamma' for
// all assemblages admitting a model at level gamma'. Unlike the primal it
// always has a strictly feasible point, so it converges on boundary
// assemblages where the primal multipliers stall.
struct GammaMinDual {
  double value = 0.0;
  std::vector<Matrix> witness;  // [x][a] flattened x*nA + a
};

GammaMinDual gamma_min_dual(const Assemblage& assemblage, const solver::Settings& settings) {
  const int m_a = assemblage.mA;
  const int n_a = assemblage.nA;
  const int dim = assemblage.dim;
  const auto responses = enumerate_response_functions(m_a, n_a);
  const std::size_t L = responses.size();

  solver::ConicProblem problem;
  std::vector<solver::MatVar> f_ops;
  for (int x = 0; x < m_a; ++x)
    for (int a = 0; a < n_a; ++a) f_ops.push_back(problem.add_hermitian(dim));
  std::vector<solver::MatVar> y_ops;
  for (std::size_t l = 0; l < L; ++l)
    for (int x = 0; x < m_a; ++x) y_ops.push_back(problem.add_psd(dim));
  std::vector<solver::Var> t_vars;
  for (std::size_t l = 0; l < L; ++l)
    for (int x = 0; x < m_a; ++x) t_vars.push_back(problem.add_free());

  const Matrix id = Matrix::Identity(dim, dim);
  for (std::size_t l = 0; l < L; ++l) {
    solver::MatExpr cap(dim);
    cap.add_constant(id);
    for (int x = 0; x < m_a; ++x) cap.add(y_ops[l * m_a + x], -1.0);
    problem.add_psd(cap);

    solver::ScalarExpr t_sum;
    for (int x = 0; x < m_a; ++x) t_sum.add(t_vars[l * m_a + x], 1.0);
    problem.add_eq(t_sum, 0.0);

    for (int x = 0; x < m_a; ++x) {
      solver::MatExpr dom(dim);
      dom.add(y_ops[l * m_a + x], 1.0 / m_a);
      dom.add(f_ops[static_cast<std::size_t>(x) * n_a + responses[l][x]], -1.0);
      dom.add(t_vars[l * m_a + x], -id);
      problem.add_psd(dom);
    }
  }

  solver::ScalarExpr objective;
  for (int x = 0; x < m_a; ++x)
    for (int a = 0; a < n_a; ++a)
      objective.add_trace(f_ops[static_cast<std::size_t>(x) * n_a + a], assemblage.at(a, x));
  problem.set_objective(solver::Sense::Maximize, objective);

  const solver::Report report = problem.solve(module_settings(settings));
  if (report.matrices.empty())
    throw SolverFailure("membership dual SDP: " + solver::to_string(report.status));

  GammaMinDual out;
  out.witness.resize(static_cast<std::size_t>(m_a) * n_a);
  for (std::size_t i = 0; i < out.witness.size(); ++i)
    out.witness[i] = report.matrices[f_ops[i].id];

  // Validate feasibility of (F, Y, t) directly so a stalled multiplier side
  // cannot poison the bound, then evaluate the objective from the iterate.
  std::vector<Matrix> y_vals(L * m_a);
  for (std::size_t i = 0; i < y_vals.size(); ++i) y_vals[i] = report.matrices[y_ops[i].id];
  for (std::size_t l = 0; l < L; ++l) {
    double t_mean = 0.0;
    for (int x = 0; x < m_a; ++x) t_mean += report.scalars[t_vars[l * m_a + x].id];
    t_mean /= m_a;
    Matrix cap = id;
    for (int x = 0; x < m_a; ++x) {
      const Matrix& y = y_vals[l * m_a + x];
      cap -= y;
      if (min_eigenvalue(y) < -1e-7)
        throw SolverFailure("membership dual iterate leaves the cone");
      const double t = report.scalars[t_vars[l * m_a + x].id] - t_mean;
      const Matrix dom =
          y / m_a - out.witness[static_cast<std::size_t>(x) * n_a + responses[l][x]] - t * id;
      if (min_eigenvalue(dom) < -1e-7)
        throw SolverFailure("membership dual iterate violates domination");
    }
    if (min_eigenvalue(cap) < -1e-7)
      throw SolverFailure("membership dual iterate violates the identity cap");
  }
  out.value = 0.0;
  for (int x = 0; x < m_a; ++x)
    for (int a = 0; a < n_a; ++a)
      out.value +=
          (out.witness[static_cast<std::size_t>(x) * n_a + a] * assemblage.at(a, x))
              .trace()
              .real();
  return out;
}

// Feasibility of a returned model, checked directly; accepts primal
// iterates whose dual side stalled.
bool certificate_is_feasible(const SlhsCertificate& cert, const Assemblage& assemblage,
                             const std::vector<std::vector<int>>& responses) {
  const int m_a = assemblage.mA;
  for (int x = 0; x < m_a; ++x)
    for (int a = 0; a < assemblage.nA; ++a) {
      Matrix sum = Matrix::Zero(assemblage.dim, assemblage.dim);
      for (std::size_t l = 0; l < responses.size(); ++l)
        if (responses[l][x] == a) sum += cert.hidden[l * m_a + x];
      if ((sum - assemblage.at(a, x)).cwiseAbs().maxCoeff() > 1e-7) return false;
    }
  for (std::size_t l = 0; l < responses.size(); ++l) {
    for (int x = 0; x < m_a; ++x) {
      if (min_eigenvalue(cert.hidden[l * m_a + x]) < -1e-8) return false;
      if (min_eigenvalue(cert.z_ops[l] - cert.hidden[l * m_a + x] / m_a) < -1e-8) return false;
      if (std::abs(cert.hidden[l * m_a + x].real().trace() - cert.p_lambda[l]) > 1e-7)
        return false;
    }
  }
  return true;
}

}  // namespace

SlhsCertificate slhs_membership(const Assemblage& assemblage, double gamma,
                                const solver::Settings& settings) {
  assemblage.validate();
  check_gamma(assemblage.mA, gamma);

  // Primal: minimize the signalling parameter sum tr(Z_lambda) over models
  // reproducing the assemblage exactly. Its optimizer is the membership
  // certificate and any feasible model upper-bounds gamma_min.
  solver::ConicProblem problem;
  ModelVars vars = add_model(problem, assemblage.mA, assemblage.nA, assemblage.dim);
  for (int x = 0; x < assemblage.mA; ++x)
    for (int a = 0; a < assemblage.nA; ++a)
      problem.add_mat_eq(member_expr(vars, a, x, assemblage.mA, assemblage.dim),
                         assemblage.at(a, x));
  problem.set_objective(solver::Sense::Minimize, total_z_trace(vars));
  const solver::Report report = problem.solve(module_settings(settings));
  if (report.matrices.empty())
    throw SolverFailure("membership SDP: " + solver::to_string(report.status));

  SlhsCertificate cert;
  cert.status = report.status;
  cert.gamma = gamma;
  fill_certificate(cert, vars, report, assemblage.mA, 1.0);
  double upper = 0.0;
  for (const auto& z : cert.z_ops) upper += z.real().trace();
  if (report.status != solver::Status::Optimal &&
      !certificate_is_feasible(cert, assemblage, vars.responses))
    throw SolverFailure("membership SDP: " + solver::to_string(report.status));

  // Independent certified lower bound plus the separating functional.
  const GammaMinDual dual = gamma_min_dual(assemblage, settings);
  if (upper - dual.value > kSandwichTol || dual.value - upper > kSandwichTol)
    throw SolverFailure("membership primal/dual values disagree: " + std::to_string(upper) +
                        " vs " + std::to_string(dual.value));

  cert.gamma_min = 0.5 * (upper + dual.value);
  cert.feasible = upper <= gamma + kMembershipTol;
  cert.witness_margin = dual.value - gamma;
  if (!cert.feasible) cert.witness = dual.witness;
  return cert;
}

namespace {

RobustnessResult robustness_impl(const Assemblage& assemblage, double gamma, bool white_noise,
                                 const solver::Settings& settings) {
  assemblage.validate();
  check_gamma(assemblage.mA, gamma);
  const int m_a = assemblage.mA;
  const int n_a = assemblage.nA;
  const int dim = assemblage.dim;

  // Barred formulation: minimize (1/mA) sum tr(sigma_bar) - 1 where the
  // barred member dominates the tested assemblage (generalized) or equals
  // it plus a scaled white-noise term, and the signalling budget scales
  // with the barred normalization.
  solver::ConicProblem problem;
  ModelVars vars = add_model(problem, m_a, n_a, dim);

  solver::ScalarExpr total_trace;  // (1/mA) sum_ax tr(sigma_bar[a|x])
  std::vector<solver::MatExpr> members;
  members.reserve(static_cast<std::size_t>(m_a) * n_a);
  for (int x = 0; x < m_a; ++x)
    for (int a = 0; a < n_a; ++a) {
      members.push_back(member_expr(vars, a, x, m_a, dim));
      for (const auto& [id, coeff] : members.back().mat_terms())
        total_trace.add_trace_identity(solver::MatVar{id, dim}, coeff / m_a);
    }

  if (!white_noise) {
    for (int x = 0; x < m_a; ++x)
      for (int a = 0; a < n_a; ++a) {
        solver::MatExpr expr = members[static_cast<std::size_t>(x) * n_a + a];
        expr.add_constant(-assemblage.at(a, x));
        problem.add_psd(expr);
      }
  } else {
    // sigma + ((1/mA) sum tr(sigma_bar) - 1) * I/(d*nA) == sigma_bar, with
    // the mixing weight written directly through the hidden-state traces
    // rather than as its own variable. The noise term must itself be a
    // normalized assemblage direction (sum_a tr = 1 per setting) or the
    // trace bookkeeping pins the weight at zero whenever nA differs from
    // mA.
    const Matrix noise = Matrix::Identity(dim, dim) / static_cast<double>(dim * n_a);
    for (int x = 0; x < m_a; ++x)
      for (int a = 0; a < n_a; ++a) {
        solver::MatExpr expr = members[static_cast<std::size_t>(x) * n_a + a];
        expr.add_constant(noise);  // the "+1" of (1 - total/mA) * noise
        for (const auto& [id, h] : total_trace.trace_terms()) {
          (void)h;
          expr.add_scaled_trace(solver::MatVar{id, dim}, -1.0 / m_a, noise);
        }
        problem.add_mat_eq(expr, assemblage.at(a, x));
      }
  }

  {
    // sum tr(Z_lambda) <= gamma * (1/mA) sum tr(sigma_bar)
    solver::ScalarExpr budget = total_z_trace(vars);
    for (const auto& [id, h] : total_trace.trace_terms())
      budget.add_trace(solver::MatVar{id, dim}, -gamma * h);
    problem.add_le(budget, 0.0);
  }

  solver::ScalarExpr objective = total_trace;
  objective.add_constant(-1.0);
  problem.set_objective(solver::Sense::Minimize, objective);

  const solver::Report report = problem.solve(module_settings(settings));
  if (report.status != solver::Status::Optimal)
    throw SolverFailure(std::string(white_noise ? "white-noise" : "generalized") +
                        " robustness SDP: " + solver::to_string(report.status));

  RobustnessResult result;
  result.white_noise = white_noise;
  result.status = report.status;
  result.value = std::max(0.0, report.objective);

  const double scale = 1.0 + report.objective;
  SlhsCertificate& cert = result.certificate;
  cert.status = report.status;
  cert.gamma = gamma;
  cert.feasible = true;
  fill_certificate(cert, vars, report, m_a, scale > 1e-12 ? 1.0 / scale : 1.0);
  cert.gamma_min = 0.0;
  for (const auto& z : cert.z_ops) cert.gamma_min += z.real().trace();

  if (!white_noise && result.value > 1e-9) {
    Assemblage tau;
    tau.mA = m_a;
    tau.nA = n_a;
    tau.dim = dim;
    tau.sigma.resize(static_cast<std::size_t>(m_a) * n_a);
    for (int x = 0; x < m_a; ++x)
      for (int a = 0; a < n_a; ++a) {
        Matrix bar = Matrix::Zero(dim, dim);
        const auto& expr = members[static_cast<std::size_t>(x) * n_a + a];
        for (const auto& [id, coeff] : expr.mat_terms())
          bar += coeff * report.matrices[id];
        tau.at(a, x) = (bar - assemblage.at(a, x)) / result.value;
      }
    result.noise = std::move(tau);
  }
  return result;
}

}  // namespace

RobustnessResult slhs_robustness(const Assemblage& assemblage, double gamma,
                                 const solver::Settings& settings) {
  return robustness_impl(assemblage, gamma, false, settings);
}

RobustnessResult slhs_white_noise_robustness(const Assemblage& assemblage, double gamma,
                                             const solver::Settings& settings) {
  return robustness_impl(assemblage, gamma, true, settings);
}

SteeringReport table1_pipeline(const Assemblage& assemblage, const solver::Settings& settings) {
  SteeringReport report;
  report.gamma = gamma_from_assemblage(assemblage, settings);
  report.pg = report.gamma;
  report.sr = slhs_robustness(assemblage, report.gamma, settings).value;
  report.sr_whitenoise = slhs_white_noise_robustness(assemblage, report.gamma, settings).value;
  report.status = solver::Status::Optimal;
  return report;
}

}  // namespace sigbell::slhs
