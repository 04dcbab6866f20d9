#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sigbell/errors.hpp"
#include "sigbell/scenario.hpp"

namespace sigbell {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest dimension handled by the dense eigensolvers used here.
inline constexpr int kMaxDim = 64;

/// Eigenvalues in [-kPsdTol, 0) are treated as zero when validating
/// positive semidefiniteness or taking operator square roots.
inline constexpr double kPsdTol = 1e-9;

/// A family of subnormalized states sigma[a|x] on Bob's side, indexed by
/// Alice's outcome a and setting x. Satisfies sigma[a|x] >= 0 and
/// sum_a tr(sigma[a|x]) = 1 for every x.
struct Assemblage {
  int mA = 0;
  int nA = 0;
  int dim = 0;
  std::vector<Matrix> sigma;  // [x][a] flattened as x * nA + a

  const Matrix& at(int a, int x) const { return sigma[static_cast<std::size_t>(x) * nA + a]; }
  Matrix& at(int a, int x) { return sigma[static_cast<std::size_t>(x) * nA + a]; }

  /// mu_x = sum_a sigma[a|x]
  Matrix reduced_state(int x) const;
  std::vector<Matrix> reduced_states() const;

  void validate(double tol = 1e-7) const;
};

bool is_hermitian(const Matrix& m, double tol = 1e-12);
void require_hermitian(const Matrix& m, double tol = 1e-12);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd eigs_hermitian(const Matrix& m);

double min_eigenvalue(const Matrix& m);

/// PSD square root; eigenvalues in [-kPsdTol, 0) are clamped to zero and
/// anything more negative raises NotPSD.
Matrix sqrt_psd(const Matrix& m);

/// Sum of absolute eigenvalues (Schatten 1-norm) of a Hermitian matrix.
double trace_norm(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// Partial trace over the first factor of a (dimA*dimB) x (dimA*dimB)
/// operator, with the row-major Kronecker convention used by kron().
Matrix partial_trace_A(const Matrix& m, int dim_a, int dim_b);

Matrix identity(int dim);

/// Rank-one projector |v><v| / <v|v>.
Matrix projector(const Vector& v);

/// Maximally entangled projector |Phi+><Phi+| with |Phi+> = sum_i |ii>/sqrt(d).
Matrix max_entangled_projector(int d);

/// v * Phi+ + (1 - v) * I / d^2 on two qudits of local dimension d.
Matrix isotropic_state(int d, double v);

/// Column k holds the Fourier vector sum_j omega^(jk) |j> / sqrt(d).
Matrix fourier_basis(int d);

/// Projective measurements as [setting][outcome] projector tables.
using MeasurementFamily = std::vector<std::vector<Matrix>>;

/// X, Y, Z eigenprojectors, outcome 0 = +1 eigenvector.
MeasurementFamily pauli_measurements();

/// Alice A0 = Z, A1 = X; Bob B0 = (Z+X)/sqrt(2), B1 = (Z-X)/sqrt(2).
struct ChshMeasurements {
  MeasurementFamily alice;
  MeasurementFamily bob;
};
ChshMeasurements chsh_measurements();

/// sigma[a|x] = tr_A[(M[a|x] (x) I) rho].
Assemblage assemblage_from(const Matrix& state, const MeasurementFamily& measurements);

/// Behavior p(a,b|x,y) = tr[(A[a|x] (x) B[b|y]) rho].
Behavior behavior_from_state(const Matrix& state, const MeasurementFamily& alice,
                             const MeasurementFamily& bob);

enum class StandardBehavior { IdealQuantumChsh, PrBox, LocalCorr, Uniform };

/// Closed-form CHSH-scenario reference behaviors.
Behavior standard_behavior(StandardBehavior kind);

/// Qutrit two-setting assemblage with tunable signalling: prepared states
/// from the computational basis (x = 0) and the transposed Fourier basis
/// (x = 1), conjugated by sqrt(mu_x) with mu_1 = k|0><0| + (1-k) I/3 and
/// mu_2 = k |psi><psi| + (1-k) I/3 for psi = (|1>+|2>)/sqrt(2).
Assemblage qutrit_signalling_assemblage(double v, double k);

}  // namespace sigbell
