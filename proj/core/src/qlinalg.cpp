#include "sigbell/qlinalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace sigbell {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

Matrix Assemblage::reduced_state(int x) const {
  Matrix mu = Matrix::Zero(dim, dim);
  for (int a = 0; a < nA; ++a) mu += at(a, x);
  return mu;
}

std::vector<Matrix> Assemblage::reduced_states() const {
  std::vector<Matrix> mus;
  mus.reserve(mA);
  for (int x = 0; x < mA; ++x) mus.push_back(reduced_state(x));
  return mus;
}

void Assemblage::validate(double tol) const {
  if (mA < 1 || nA < 1 || dim < 1 || dim > kMaxDim)
    throw InvalidArgs("assemblage dimensions out of range");
  if (sigma.size() != static_cast<std::size_t>(mA) * nA)
    throw DimensionMismatch("assemblage has the wrong number of operator blocks");
  for (int x = 0; x < mA; ++x) {
    double total = 0.0;
    for (int a = 0; a < nA; ++a) {
      const Matrix& op = at(a, x);
      if (op.rows() != dim || op.cols() != dim)
        throw DimensionMismatch("assemblage operator has the wrong dimension");
      require_hermitian(op, 1e-9);
      if (min_eigenvalue(op) < -kPsdTol)
        throw NotPSD("assemblage operator is not positive semidefinite");
      total += op.real().trace();
    }
    if (std::abs(total - 1.0) > tol)
      throw InvalidArgs("assemblage traces for setting " + std::to_string(x) + " sum to " +
                        std::to_string(total));
  }
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) throw InvalidArgs("matrix is not Hermitian");
}

Eigen::VectorXd eigs_hermitian(const Matrix& m) {
  require_hermitian(m, 1e-9);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const Matrix& m) { return eigs_hermitian(m).minCoeff(); }

Matrix sqrt_psd(const Matrix& m) {
  require_hermitian(m, 1e-9);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Eigen::VectorXd vals = solver.eigenvalues();
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < -kPsdTol) throw NotPSD("matrix has eigenvalue " + std::to_string(vals[i]));
    vals[i] = vals[i] > 0.0 ? std::sqrt(vals[i]) : 0.0;
  }
  return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
}

double trace_norm(const Matrix& m) { return eigs_hermitian(m).cwiseAbs().sum(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace_A(const Matrix& m, int dim_a, int dim_b) {
  if (m.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || m.rows() != m.cols())
    throw DimensionMismatch("operator does not factor as dimA * dimB");
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_a; ++k)
    out += m.block(static_cast<Eigen::Index>(k) * dim_b, static_cast<Eigen::Index>(k) * dim_b,
                   dim_b, dim_b);
  return out;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix projector(const Vector& v) {
  const double n2 = v.squaredNorm();
  if (n2 <= 0.0) throw InvalidArgs("cannot project on the zero vector");
  return v * v.adjoint() / n2;
}

Matrix max_entangled_projector(int d) {
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) phi[static_cast<Eigen::Index>(i) * d + i] = 1.0;
  return phi * phi.adjoint() / static_cast<double>(d);
}

Matrix isotropic_state(int d, double v) {
  if (v < 0.0 || v > 1.0) throw InvalidArgs("isotropic visibility must lie in [0,1]");
  return v * max_entangled_projector(d) +
         (1.0 - v) * identity(d * d) / static_cast<double>(d * d);
}

Matrix fourier_basis(int d) {
  Matrix f(d, d);
  const double w = 2.0 * std::numbers::pi / d;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f(j, k) = std::exp(kI * (w * j * k)) / std::sqrt(static_cast<double>(d));
  return f;
}

MeasurementFamily pauli_measurements() {
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  const Matrix id = identity(2);
  MeasurementFamily family;
  for (const Matrix& pauli : {x, y, z})
    family.push_back({(id + pauli) / 2.0, (id - pauli) / 2.0});
  return family;
}

ChshMeasurements chsh_measurements() {
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const Matrix id = identity(2);
  const double s = std::numbers::sqrt2;
  auto projs = [&](const Matrix& obs) {
    return std::vector<Matrix>{(id + obs) / 2.0, (id - obs) / 2.0};
  };
  ChshMeasurements m;
  m.alice = {projs(z), projs(x)};
  m.bob = {projs((z + x) / s), projs((z - x) / s)};
  return m;
}

namespace {

void validate_povms(const MeasurementFamily& measurements, int dim) {
  for (const auto& setting : measurements) {
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& op : setting) {
      if (op.rows() != dim || op.cols() != dim)
        throw DimensionMismatch("POVM element dimension mismatch");
      require_hermitian(op, 1e-9);
      if (min_eigenvalue(op) < -kPsdTol) throw InvalidPOVM("POVM element is not PSD");
      sum += op;
    }
    if ((sum - identity(dim)).cwiseAbs().maxCoeff() > 1e-8)
      throw InvalidPOVM("POVM elements do not sum to the identity");
  }
}

}  // namespace

Assemblage assemblage_from(const Matrix& state, const MeasurementFamily& measurements) {
  if (measurements.empty() || measurements.front().empty())
    throw InvalidArgs("measurement family is empty");
  const int dim_a = static_cast<int>(measurements.front().front().rows());
  if (state.rows() != state.cols() || state.rows() % dim_a != 0)
    throw DimensionMismatch("state dimension does not factor over the measured party");
  const int dim_b = static_cast<int>(state.rows()) / dim_a;
  require_hermitian(state, 1e-9);
  if (min_eigenvalue(state) < -kPsdTol) throw NotPSD("state is not positive semidefinite");
  if (std::abs(state.real().trace() - 1.0) > 1e-8) throw InvalidArgs("state must have unit trace");
  validate_povms(measurements, dim_a);

  Assemblage out;
  out.mA = static_cast<int>(measurements.size());
  out.nA = static_cast<int>(measurements.front().size());
  out.dim = dim_b;
  out.sigma.resize(static_cast<std::size_t>(out.mA) * out.nA);
  const Matrix id_b = identity(dim_b);
  for (int x = 0; x < out.mA; ++x) {
    if (static_cast<int>(measurements[x].size()) != out.nA)
      throw DimensionMismatch("all settings must share the outcome count");
    for (int a = 0; a < out.nA; ++a)
      out.at(a, x) = partial_trace_A(kron(measurements[x][a], id_b) * state, dim_a, dim_b);
  }
  return out;
}

Behavior behavior_from_state(const Matrix& state, const MeasurementFamily& alice,
                             const MeasurementFamily& bob) {
  if (alice.empty() || bob.empty()) throw InvalidArgs("measurement families are empty");
  const int dim_a = static_cast<int>(alice.front().front().rows());
  const int dim_b = static_cast<int>(bob.front().front().rows());
  if (state.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw DimensionMismatch("state does not match the measured dimensions");
  validate_povms(alice, dim_a);
  validate_povms(bob, dim_b);
  Scenario s(static_cast<int>(alice.size()), static_cast<int>(bob.size()),
             static_cast<int>(alice.front().size()), static_cast<int>(bob.front().size()));
  std::vector<double> p(static_cast<std::size_t>(s.cells()) * s.outcome_pairs(), 0.0);
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y)
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b)
          p[((static_cast<std::size_t>(x) * s.mB + y) * s.nA + a) * s.nB + b] =
              (kron(alice[x][a], bob[y][b]) * state).trace().real();
  return Behavior(s, std::move(p));
}

Behavior standard_behavior(StandardBehavior kind) {
  const Scenario s = Scenario::chsh();
  std::vector<double> p(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double sign = ((a + b + x * y) % 2 == 0) ? 1.0 : -1.0;
          double v = 0.0;
          switch (kind) {
            case StandardBehavior::IdealQuantumChsh:
              v = 0.25 * (1.0 + sign / std::numbers::sqrt2);
              break;
            case StandardBehavior::PrBox:
              v = 0.25 * (1.0 + sign);
              break;
            case StandardBehavior::LocalCorr:
              v = 0.25 * (1.0 + sign / 2.0);
              break;
            case StandardBehavior::Uniform:
              v = 0.25;
              break;
          }
          p[((static_cast<std::size_t>(x) * 2 + y) * 2 + a) * 2 + b] = v;
        }
  return Behavior(s, std::move(p));
}

Assemblage qutrit_signalling_assemblage(double v, double k) {
  if (v < 0.0 || v > 1.0 || k < 0.0 || k > 1.0)
    throw InvalidArgs("qutrit model parameters must lie in [0,1]");
  const Matrix id = identity(3);

  // Transposed-basis projectors: computational projectors are invariant,
  // the Fourier ones pick up entrywise complex conjugation.
  const Matrix fourier = fourier_basis(3);
  std::vector<std::vector<Matrix>> basis(2);
  for (int a = 0; a < 3; ++a) {
    basis[0].push_back(projector(Vector::Unit(3, a)));
    basis[1].push_back(projector(fourier.col(a)).transpose().eval());
  }

  Vector psi = Vector::Zero(3);
  psi[1] = 1.0;
  psi[2] = 1.0;
  std::vector<Matrix> mu = {k * projector(Vector::Unit(3, 0)) + (1.0 - k) * id / 3.0,
                            k * projector(psi) + (1.0 - k) * id / 3.0};

  Assemblage out;
  out.mA = 2;
  out.nA = 3;
  out.dim = 3;
  out.sigma.resize(6);
  for (int x = 0; x < 2; ++x) {
    const Matrix root = sqrt_psd(mu[x]);
    for (int a = 0; a < 3; ++a) {
      const Matrix ideal = v * basis[x][a] + (1.0 - v) * id / 3.0;
      out.at(a, x) = root * ideal * root;
    }
  }
  return out;
}

}  // namespace sigbell
