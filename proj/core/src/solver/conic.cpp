#include "sigbell/solver/conic.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>

#include "json.hpp"
#include "solver/ipm_backend.hpp"
#include "solver/simplex_backend.hpp"

namespace sigbell::solver {

namespace detail {

// Hermitian matrices of dimension d are parametrized by d*d reals: for each
// column j, the diagonal entry then (re, im) pairs for rows i > j.
int herm_param_count(int d) { return d * d; }

Matrix herm_basis(int d, int k) {
  Matrix out = Matrix::Zero(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    if (idx == k) {
      out(j, j) = 1.0;
      return out;
    }
    ++idx;
    for (int i = j + 1; i < d; ++i) {
      if (idx == k) {
        out(i, j) = 1.0;
        out(j, i) = 1.0;
        return out;
      }
      ++idx;
      if (idx == k) {
        out(i, j) = std::complex<double>(0.0, 1.0);
        out(j, i) = std::complex<double>(0.0, -1.0);
        return out;
      }
      ++idx;
    }
  }
  throw InvalidArgs("hermitian basis index out of range");
}

Matrix herm_from_params(int d, const double* params) {
  Matrix out = Matrix::Zero(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    out(j, j) = params[idx++];
    for (int i = j + 1; i < d; ++i) {
      const double re = params[idx++];
      const double im = params[idx++];
      out(i, j) = std::complex<double>(re, im);
      out(j, i) = std::complex<double>(re, -im);
    }
  }
  return out;
}

double herm_param_of(const Matrix& h, int k) {
  int idx = 0;
  const int d = static_cast<int>(h.rows());
  for (int j = 0; j < d; ++j) {
    if (idx == k) return h(j, j).real();
    ++idx;
    for (int i = j + 1; i < d; ++i) {
      if (idx == k) return h(i, j).real();
      ++idx;
      if (idx == k) return h(i, j).imag();
      ++idx;
    }
  }
  throw InvalidArgs("hermitian parameter index out of range");
}

// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
Eigen::MatrixXd embed(const Matrix& x) {
  const int d = static_cast<int>(x.rows());
  Eigen::MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = x.real();
  out.bottomRightCorner(d, d) = x.real();
  out.topRightCorner(d, d) = -x.imag();
  out.bottomLeftCorner(d, d) = x.imag();
  return out;
}

// Inverse of embed() in the Lagrangian sense: the Hermitian Y with
// tr(Y H) = tr(Z_emb embed(H)) for every Hermitian H.
Matrix unembed_dual(const Eigen::MatrixXd& z, int d) {
  const Eigen::MatrixXd a = z.topLeftCorner(d, d);
  const Eigen::MatrixXd b = z.topRightCorner(d, d);
  const Eigen::MatrixXd bt = z.bottomLeftCorner(d, d);
  const Eigen::MatrixXd dd = z.bottomRightCorner(d, d);
  Matrix out(d, d);
  out.real() = a + dd;
  out.imag() = bt - b;
  return 0.5 * (out + out.adjoint().eval());
}

}  // namespace detail

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

Settings Settings::from_env() {
  static std::once_flag flag;
  static Settings cached;
  std::call_once(flag, [] {
    const char* path = std::getenv("SIGBELL_SOLVER_CONFIG");
    if (!path) return;
    std::ifstream in(path);
    if (!in) return;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("solver config: ") + e.what());
    }
    if (j.contains("feas_tol")) cached.feas_tol = j["feas_tol"].get<double>();
    if (j.contains("gap_tol")) cached.gap_tol = j["gap_tol"].get<double>();
    if (j.contains("max_iter")) cached.max_iter = j["max_iter"].get<int>();
    if (j.contains("max_pivots")) cached.max_pivots = j["max_pivots"].get<long>();
    if (j.contains("verbosity")) cached.verbosity = j["verbosity"].get<int>();
  });
  return cached;
}

ScalarExpr& ScalarExpr::add(Var v, double coeff) {
  if (v.id < 0) throw InvalidArgs("unbound variable in expression");
  scalar_terms_.emplace_back(v.id, coeff);
  return *this;
}

ScalarExpr& ScalarExpr::add_trace(MatVar m, const Matrix& h) {
  if (m.id < 0) throw InvalidArgs("unbound matrix variable in expression");
  if (h.rows() != m.dim || h.cols() != m.dim)
    throw DimensionMismatch("trace coefficient dimension mismatch");
  trace_terms_.emplace_back(m.id, h);
  return *this;
}

ScalarExpr& ScalarExpr::add_trace_identity(MatVar m, double coeff) {
  return add_trace(m, coeff * Matrix::Identity(m.dim, m.dim));
}

MatExpr::MatExpr(int dim) : dim_(dim), constant_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw InvalidArgs("matrix expression dimension must be positive");
}

MatExpr& MatExpr::add_constant(const Matrix& c) {
  if (c.rows() != dim_ || c.cols() != dim_) throw DimensionMismatch("constant dimension");
  constant_ += c;
  return *this;
}

MatExpr& MatExpr::add(MatVar m, double coeff) {
  if (m.dim != dim_) throw DimensionMismatch("matrix variable dimension");
  mat_terms_.emplace_back(m.id, coeff);
  return *this;
}

MatExpr& MatExpr::add(Var v, const Matrix& h) {
  if (h.rows() != dim_ || h.cols() != dim_) throw DimensionMismatch("coefficient dimension");
  var_terms_.emplace_back(v.id, h);
  return *this;
}

MatExpr& MatExpr::add_scaled_trace(MatVar m, double coeff, const Matrix& h) {
  if (h.rows() != dim_ || h.cols() != dim_) throw DimensionMismatch("coefficient dimension");
  trace_terms_.push_back({m.id, coeff, h});
  return *this;
}

Var ConicProblem::add_nonneg() {
  scalar_nonneg_.push_back(true);
  return Var{static_cast<int>(scalar_nonneg_.size()) - 1};
}

Var ConicProblem::add_free() {
  scalar_nonneg_.push_back(false);
  return Var{static_cast<int>(scalar_nonneg_.size()) - 1};
}

std::vector<Var> ConicProblem::add_nonneg(int n) {
  std::vector<Var> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(add_nonneg());
  return vars;
}

MatVar ConicProblem::add_psd(int dim) {
  if (dim < 1) throw InvalidArgs("matrix variable dimension must be positive");
  matvar_dims_.push_back(dim);
  matvar_psd_.push_back(true);
  return MatVar{static_cast<int>(matvar_dims_.size()) - 1, dim};
}

MatVar ConicProblem::add_hermitian(int dim) {
  if (dim < 1) throw InvalidArgs("matrix variable dimension must be positive");
  matvar_dims_.push_back(dim);
  matvar_psd_.push_back(false);
  return MatVar{static_cast<int>(matvar_dims_.size()) - 1, dim};
}

void ConicProblem::add_eq(const ScalarExpr& expr, double rhs) { eq_.emplace_back(expr, rhs); }
void ConicProblem::add_le(const ScalarExpr& expr, double rhs) { le_.emplace_back(expr, rhs); }

void ConicProblem::add_ge(const ScalarExpr& expr, double rhs) {
  ScalarExpr negated(-expr.constant());
  for (const auto& [id, coeff] : expr.scalar_terms()) negated.add(Var{id}, -coeff);
  for (const auto& [id, h] : expr.trace_terms())
    negated.add_trace(MatVar{id, static_cast<int>(h.rows())}, -h);
  le_.emplace_back(negated, -rhs);
}

void ConicProblem::add_psd(const MatExpr& expr) { psd_.push_back(expr); }

ConicProblem::MatEqRef ConicProblem::add_mat_eq(const MatExpr& expr, const Matrix& rhs) {
  const int d = expr.dim();
  if (rhs.rows() != d || rhs.cols() != d) throw DimensionMismatch("matrix equality dimension");
  MatEqRef ref{num_eq(), d};
  for (int k = 0; k < detail::herm_param_count(d); ++k) {
    const Matrix basis = detail::herm_basis(d, k);
    ScalarExpr se((basis * expr.constant()).trace().real());
    for (const auto& [id, coeff] : expr.mat_terms())
      se.add_trace(MatVar{id, d}, coeff * basis);
    for (const auto& [id, h] : expr.var_terms()) se.add(Var{id}, (basis * h).trace().real());
    for (const auto& term : expr.trace_terms()) {
      const double weight = term.coeff * (basis * term.h).trace().real();
      const int xdim = matvar_dims_[term.id];
      se.add_trace(MatVar{term.id, xdim}, weight * Matrix::Identity(xdim, xdim));
    }
    add_eq(se, (basis * rhs).trace().real());
  }
  return ref;
}

Matrix ConicProblem::eq_dual_matrix(const Report& report, MatEqRef ref) {
  Matrix out = Matrix::Zero(ref.dim, ref.dim);
  for (int k = 0; k < detail::herm_param_count(ref.dim); ++k)
    out += report.eq_duals.at(ref.first_row + k) * detail::herm_basis(ref.dim, k);
  return out;
}

void ConicProblem::set_objective(Sense sense, const ScalarExpr& expr) {
  sense_ = sense;
  objective_ = expr;
}

bool ConicProblem::has_matrix_content() const { return !matvar_dims_.empty() || !psd_.empty(); }

namespace {

Report solve_via_simplex(const Settings& settings, Sense sense, const ScalarExpr& objective,
                         const std::vector<bool>& nonneg,
                         const std::vector<std::pair<ScalarExpr, double>>& eqs,
                         const std::vector<std::pair<ScalarExpr, double>>& les) {
  // Column layout: one column per nonnegative variable, a (+,-) pair per
  // free variable.
  const int num_scalars = static_cast<int>(nonneg.size());
  std::vector<int> col_of(num_scalars);
  int ncols = 0;
  for (int i = 0; i < num_scalars; ++i) {
    col_of[i] = ncols;
    ncols += nonneg[i] ? 1 : 2;
  }

  detail::LpProblem lp;
  lp.num_vars = ncols;
  lp.c.assign(ncols, 0.0);
  lp.cols.assign(ncols, {});

  const double sign = sense == Sense::Maximize ? 1.0 : -1.0;
  for (const auto& [id, coeff] : objective.scalar_terms()) {
    lp.c[col_of[id]] += sign * coeff;
    if (!nonneg[id]) lp.c[col_of[id] + 1] -= sign * coeff;
  }

  int row = 0;
  auto add_row = [&](const ScalarExpr& expr, double rhs, bool is_eq) {
    lp.rows.push_back({is_eq, rhs - expr.constant()});
    for (const auto& [id, coeff] : expr.scalar_terms()) {
      lp.cols[col_of[id]].emplace_back(row, coeff);
      if (!nonneg[id]) lp.cols[col_of[id] + 1].emplace_back(row, -coeff);
    }
    ++row;
  };
  for (const auto& [expr, rhs] : eqs) add_row(expr, rhs, true);
  for (const auto& [expr, rhs] : les) add_row(expr, rhs, false);

  const detail::LpResult lpres = detail::solve_lp_max(lp, settings);

  Report report;
  report.status = lpres.status;
  report.feas_tol = settings.feas_tol;
  report.gap_tol = settings.gap_tol;
  report.iterations = static_cast<int>(lpres.pivots);
  report.max_residual = lpres.max_residual;
  if (lpres.status == Status::Infeasible) {
    report.message = "phase 1 could not eliminate the artificial variables";
  }
  if (lpres.status != Status::Optimal && lpres.status != Status::Infeasible) return report;

  report.eq_duals.reserve(eqs.size());
  report.le_duals.reserve(les.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) report.eq_duals.push_back(lpres.y[i]);
  for (std::size_t i = 0; i < les.size(); ++i)
    report.le_duals.push_back(lpres.y[eqs.size() + i]);
  if (lpres.status != Status::Optimal) return report;

  report.objective = objective.constant();
  report.scalars.assign(num_scalars, 0.0);
  for (int i = 0; i < num_scalars; ++i) {
    double v = lpres.x[col_of[i]];
    if (!nonneg[i]) v -= lpres.x[col_of[i] + 1];
    report.scalars[i] = v;
  }
  for (const auto& [id, coeff] : objective.scalar_terms())
    report.objective += coeff * report.scalars[id];

  // Simplex duals are exact on the basis; the gap is the residual of
  // strong duality evaluated directly.
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < eqs.size(); ++i)
    dual_obj += report.eq_duals[i] * (eqs[i].second - eqs[i].first.constant());
  for (std::size_t i = 0; i < les.size(); ++i)
    dual_obj += report.le_duals[i] * (les[i].second - les[i].first.constant());
  report.duality_gap = std::abs(dual_obj - sign * (report.objective - objective.constant()));
  return report;
}

struct SdpLayout {
  int num_cols = 0;
  std::vector<int> scalar_col;
  std::vector<int> matvar_col;
};

}  // namespace

Report ConicProblem::solve(const Settings& settings) const {
  if (!has_matrix_content())
    return solve_via_simplex(settings, sense_, objective_, scalar_nonneg_, eq_, le_);

  for (const auto& expr : psd_) {
    for (const auto& [id, coeff] : expr.mat_terms())
      if (matvar_dims_[id] != expr.dim()) throw DimensionMismatch("psd constraint dimension");
  }

  // Column layout: scalar variables then Hermitian parameters per matrix
  // variable.
  SdpLayout layout;
  layout.scalar_col.resize(scalar_nonneg_.size());
  for (std::size_t i = 0; i < scalar_nonneg_.size(); ++i)
    layout.scalar_col[i] = layout.num_cols++;
  layout.matvar_col.resize(matvar_dims_.size());
  for (std::size_t i = 0; i < matvar_dims_.size(); ++i) {
    layout.matvar_col[i] = layout.num_cols;
    layout.num_cols += detail::herm_param_count(matvar_dims_[i]);
  }
  const int n = layout.num_cols;

  // Row layout: equalities (zero cone), inequalities plus nonnegative
  // variable rows (nonneg cone), then PSD blocks: one per PSD matrix
  // variable, one per PSD constraint, each over the real embedding.
  int num_nonneg_vars = 0;
  for (bool b : scalar_nonneg_)
    if (b) ++num_nonneg_vars;
  const int p = static_cast<int>(eq_.size());
  int nonneg_rows = static_cast<int>(le_.size()) + num_nonneg_vars;

  detail::ConeSpec cone;
  cone.zero_dim = p;
  cone.nonneg_dim = nonneg_rows;
  std::vector<int> psd_block_row;  // row offset of each PSD block
  int m = p + nonneg_rows;
  for (std::size_t i = 0; i < matvar_dims_.size(); ++i) {
    if (!matvar_psd_[i]) continue;
    psd_block_row.push_back(m);
    cone.psd_dims.push_back(2 * matvar_dims_[i]);
    m += detail::svec_dim(2 * matvar_dims_[i]);
  }
  std::vector<int> psd_con_row;
  for (const auto& expr : psd_) {
    psd_con_row.push_back(m);
    cone.psd_dims.push_back(2 * expr.dim());
    m += detail::svec_dim(2 * expr.dim());
  }

  detail::ConicData data;
  data.cone = cone;
  data.G = Eigen::MatrixXd::Zero(m, n);
  data.h = Eigen::VectorXd::Zero(m);
  data.c = Eigen::VectorXd::Zero(n);

  const double sign = sense_ == Sense::Minimize ? 1.0 : -1.0;
  for (const auto& [id, coeff] : objective_.scalar_terms())
    data.c[layout.scalar_col[id]] += sign * coeff;
  for (const auto& [id, h] : objective_.trace_terms()) {
    const int base = layout.matvar_col[id];
    const int d = matvar_dims_[id];
    for (int k = 0; k < detail::herm_param_count(d); ++k)
      data.c[base + k] += sign * (h * detail::herm_basis(d, k)).trace().real();
  }

  auto fill_scalar_row = [&](int row, const ScalarExpr& expr, double rhs) {
    data.h[row] = rhs - expr.constant();
    for (const auto& [id, coeff] : expr.scalar_terms())
      data.G(row, layout.scalar_col[id]) += coeff;
    for (const auto& [id, h] : expr.trace_terms()) {
      const int base = layout.matvar_col[id];
      const int d = matvar_dims_[id];
      for (int k = 0; k < detail::herm_param_count(d); ++k)
        data.G(row, base + k) += (h * detail::herm_basis(d, k)).trace().real();
    }
  };

  int row = 0;
  for (const auto& [expr, rhs] : eq_) fill_scalar_row(row++, expr, rhs);
  for (const auto& [expr, rhs] : le_) fill_scalar_row(row++, expr, rhs);
  for (std::size_t i = 0; i < scalar_nonneg_.size(); ++i) {
    if (!scalar_nonneg_[i]) continue;
    data.G(row, layout.scalar_col[i]) = -1.0;  // s = x >= 0
    ++row;
  }

  // PSD variable blocks: s = svec(embed(X)).
  {
    std::size_t block = 0;
    for (std::size_t i = 0; i < matvar_dims_.size(); ++i) {
      if (!matvar_psd_[i]) continue;
      const int d = matvar_dims_[i];
      const int r0 = psd_block_row[block++];
      const int base = layout.matvar_col[i];
      for (int k = 0; k < detail::herm_param_count(d); ++k)
        data.G.col(base + k).segment(r0, detail::svec_dim(2 * d)) -=
            detail::svec(detail::embed(detail::herm_basis(d, k)));
    }
  }
  // PSD constraint blocks: s = svec(embed(expr)) with the affine constant
  // landing on h.
  for (std::size_t ci = 0; ci < psd_.size(); ++ci) {
    const MatExpr& expr = psd_[ci];
    const int d = expr.dim();
    const int r0 = psd_con_row[ci];
    const int len = detail::svec_dim(2 * d);
    data.h.segment(r0, len) = detail::svec(detail::embed(expr.constant()));
    for (const auto& [id, coeff] : expr.mat_terms()) {
      const int base = layout.matvar_col[id];
      for (int k = 0; k < detail::herm_param_count(d); ++k)
        data.G.col(base + k).segment(r0, len) -=
            coeff * detail::svec(detail::embed(detail::herm_basis(d, k)));
    }
    for (const auto& [id, h] : expr.var_terms())
      data.G.col(layout.scalar_col[id]).segment(r0, len) -= detail::svec(detail::embed(h));
    for (const auto& term : expr.trace_terms()) {
      const int base = layout.matvar_col[term.id];
      const int xdim = matvar_dims_[term.id];
      const Eigen::VectorXd hvec = detail::svec(detail::embed(term.h));
      for (int k = 0; k < detail::herm_param_count(xdim); ++k) {
        const double trace_k = detail::herm_basis(xdim, k).trace().real();
        if (trace_k != 0.0)
          data.G.col(base + k).segment(r0, len) -= term.coeff * trace_k * hvec;
      }
    }
  }

  const detail::ConicResult cres = detail::solve_conic(data, settings);

  Report report;
  report.status = cres.status;
  report.iterations = cres.iterations;
  report.feas_tol = settings.feas_tol;
  report.gap_tol = settings.gap_tol;
  report.duality_gap = std::abs(cres.primal_obj - cres.dual_obj);
  if (cres.w.size() > 0) {
    const Eigen::VectorXd rz = data.G * cres.w + cres.s - data.h;
    const Eigen::VectorXd rx = data.c + data.G.transpose() * cres.z;
    report.max_residual =
        std::max(rz.lpNorm<Eigen::Infinity>(), rx.lpNorm<Eigen::Infinity>());
  }
  if (cres.status != Status::Optimal) report.message = "interior-point method did not converge";
  if (cres.w.size() == 0) return report;

  report.objective = objective_.constant() + sign * cres.primal_obj;

  report.scalars.assign(scalar_nonneg_.size(), 0.0);
  for (std::size_t i = 0; i < scalar_nonneg_.size(); ++i)
    report.scalars[i] = cres.w[layout.scalar_col[i]];
  report.matrices.resize(matvar_dims_.size());
  for (std::size_t i = 0; i < matvar_dims_.size(); ++i)
    report.matrices[i] =
        detail::herm_from_params(matvar_dims_[i], cres.w.data() + layout.matvar_col[i]);

  report.eq_duals.resize(eq_.size());
  for (std::size_t i = 0; i < eq_.size(); ++i) report.eq_duals[i] = cres.z[i];
  report.le_duals.resize(le_.size());
  for (std::size_t i = 0; i < le_.size(); ++i) report.le_duals[i] = cres.z[p + i];
  report.psd_duals.resize(psd_.size());
  for (std::size_t ci = 0; ci < psd_.size(); ++ci) {
    const int d = psd_[ci].dim();
    const int len = detail::svec_dim(2 * d);
    const Eigen::MatrixXd zm = detail::smat(cres.z.segment(psd_con_row[ci], len), 2 * d);
    report.psd_duals[ci] = detail::unembed_dual(zm, d);
  }
  return report;
}

}  // namespace sigbell::solver
