#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "sigbell/errors.hpp"

namespace sigbell::solver {

using Matrix = Eigen::MatrixXcd;

enum class Sense { Minimize, Maximize };

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(Status status);

struct Settings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;         // interior-point iteration cap
  long max_pivots = 2000000;  // simplex pivot cap
  int verbosity = 0;

  /// Reads overrides from the JSON file named by $SIGBELL_SOLVER_CONFIG,
  /// when set. Unknown keys are ignored.
  static Settings from_env();
};

/// Scalar decision variable handle.
struct Var {
  int id = -1;
};

/// Hermitian matrix decision variable handle.
struct MatVar {
  int id = -1;
  int dim = 0;
};

/// Real affine expression over scalar variables and traces of Hermitian
/// matrix variables: constant + sum coeff*var + sum tr(H*X).
class ScalarExpr {
 public:
  ScalarExpr() = default;
  ScalarExpr(double constant) : constant_(constant) {}  // NOLINT(runtime/explicit)
  ScalarExpr(Var v) { add(v, 1.0); }                    // NOLINT(runtime/explicit)

  ScalarExpr& add(Var v, double coeff);
  ScalarExpr& add_trace(MatVar m, const Matrix& h);
  ScalarExpr& add_trace(MatVar m) { return add_trace_identity(m, 1.0); }
  ScalarExpr& add_trace_identity(MatVar m, double coeff);
  ScalarExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  double constant() const { return constant_; }
  const std::vector<std::pair<int, double>>& scalar_terms() const { return scalar_terms_; }
  const std::vector<std::pair<int, Matrix>>& trace_terms() const { return trace_terms_; }

 private:
  double constant_ = 0.0;
  std::vector<std::pair<int, double>> scalar_terms_;  // (var id, coeff)
  std::vector<std::pair<int, Matrix>> trace_terms_;   // (matvar id, H)
};

/// Hermitian-matrix-valued affine expression:
/// constant + sum coeff*X_k + sum var_j*H_j + sum coeff*tr(X_k)*H.
class MatExpr {
 public:
  explicit MatExpr(int dim);

  MatExpr& add_constant(const Matrix& c);
  MatExpr& add(MatVar m, double coeff);
  MatExpr& add(Var v, const Matrix& h);
  /// coeff * tr(X) * h
  MatExpr& add_scaled_trace(MatVar m, double coeff, const Matrix& h);

  struct TraceTerm {
    int id;
    double coeff;
    Matrix h;
  };

  int dim() const { return dim_; }
  const Matrix& constant() const { return constant_; }
  const std::vector<std::pair<int, double>>& mat_terms() const { return mat_terms_; }
  const std::vector<std::pair<int, Matrix>>& var_terms() const { return var_terms_; }
  const std::vector<TraceTerm>& trace_terms() const { return trace_terms_; }

 private:
  int dim_;
  Matrix constant_;
  std::vector<std::pair<int, double>> mat_terms_;  // (matvar id, coeff)
  std::vector<std::pair<int, Matrix>> var_terms_;  // (var id, H)
  std::vector<TraceTerm> trace_terms_;
};

/// Solution report. Dual values follow one convention for both backends:
/// with sigma = +1 for Minimize and -1 for Maximize, the reported
/// multipliers (y for equalities, u >= 0 for inequalities, Y >= 0 for
/// semidefinite constraints) satisfy, for every variable,
///   sigma*grad(objective) + sum y*grad(eq) + sum u*grad(le)
///     - sum <Y, grad(psd expr)> = r,
/// where r = 0 on free variables and r >= 0 on nonnegative ones, together
/// with complementary slackness.
struct Report {
  Status status = Status::NumericalFailure;
  double objective = 0.0;
  double duality_gap = 0.0;
  double max_residual = 0.0;
  int iterations = 0;
  double feas_tol = 0.0;
  double gap_tol = 0.0;
  std::string message;

  std::vector<double> scalars;
  std::vector<Matrix> matrices;

  std::vector<double> eq_duals;
  std::vector<double> le_duals;
  std::vector<Matrix> psd_duals;
};

/// A conic problem over nonnegative scalars, free scalars and Hermitian
/// matrix variables, with affine equality, inequality and semidefinite
/// constraints. Problems without matrix content are dispatched to the
/// simplex backend, everything else to the interior-point backend.
class ConicProblem {
 public:
  Var add_nonneg();
  Var add_free();
  std::vector<Var> add_nonneg(int n);
  MatVar add_psd(int dim);
  MatVar add_hermitian(int dim);  // free Hermitian matrix variable

  void add_eq(const ScalarExpr& expr, double rhs);
  void add_le(const ScalarExpr& expr, double rhs);
  void add_ge(const ScalarExpr& expr, double rhs);
  /// expr >= 0 in the semidefinite order.
  void add_psd(const MatExpr& expr);

  /// Entrywise Hermitian equality expr == rhs, expanded over a Hermitian
  /// operator basis. The returned handle recovers the matrix-valued
  /// multiplier from a report via eq_dual_matrix().
  struct MatEqRef {
    int first_row = 0;
    int dim = 0;
  };
  MatEqRef add_mat_eq(const MatExpr& expr, const Matrix& rhs);
  static Matrix eq_dual_matrix(const Report& report, MatEqRef ref);

  void set_objective(Sense sense, const ScalarExpr& expr);

  int num_scalars() const { return static_cast<int>(scalar_nonneg_.size()); }
  int num_eq() const { return static_cast<int>(eq_.size()); }
  int num_le() const { return static_cast<int>(le_.size()); }
  bool has_matrix_content() const;

  void reserve_eq(std::size_t n) { eq_.reserve(n); }
  void reserve_le(std::size_t n) { le_.reserve(n); }

  Report solve(const Settings& settings = Settings::from_env()) const;

 private:
  friend struct Assembly;
  std::vector<bool> scalar_nonneg_;
  std::vector<int> matvar_dims_;
  std::vector<bool> matvar_psd_;
  std::vector<std::pair<ScalarExpr, double>> eq_;
  std::vector<std::pair<ScalarExpr, double>> le_;
  std::vector<MatExpr> psd_;
  Sense sense_ = Sense::Minimize;
  ScalarExpr objective_;
};

}  // namespace sigbell::solver
