#include "sigbell/witness.hpp"

#include <cmath>

#include "sigbell/discrimination.hpp"

namespace sigbell {

void SteeringWitness::validate() const {
  if (mA < 1 || nA < 1 || dim < 1) throw InvalidArgs("witness dimensions out of range");
  if (operators.size() != static_cast<std::size_t>(mA) * nA)
    throw DimensionMismatch("witness has the wrong number of operators");
  for (const Matrix& op : operators) {
    if (op.rows() != dim || op.cols() != dim)
      throw DimensionMismatch("witness operator dimension mismatch");
    require_hermitian(op, 1e-9);
    if (min_eigenvalue(op) < -kPsdTol) throw NotPSD("witness operator is not PSD");
  }
}

double evaluate_witness(const Assemblage& assemblage, const SteeringWitness& witness) {
  if (assemblage.mA != witness.mA || assemblage.nA != witness.nA ||
      assemblage.dim != witness.dim)
    throw DimensionMismatch("assemblage and witness shapes differ");
  double value = 0.0;
  for (int x = 0; x < witness.mA; ++x)
    for (int a = 0; a < witness.nA; ++a)
      value += (assemblage.at(a, x) * witness.at(a, x)).trace().real();
  return value;
}

double adjusted_bound(double lhs_bound, int m_a, double gamma, AdjustMode mode) {
  if (m_a < 1) throw InvalidArgs("mA must be positive");
  if (gamma < 1.0 / m_a - 1e-9 || gamma > 1.0 + 1e-9)
    throw InvalidGamma("gamma must lie in [1/mA, 1]");
  const double factor = mode == AdjustMode::Paper
                            ? 1.0 + m_a * gamma
                            : 1.0 + std::max(0.0, m_a * gamma - 1.0);
  return lhs_bound * factor;
}

double schmidt_bound(int d, int n) {
  if (d < 1 || n < 1 || n > d) throw InvalidArgs("schmidt_bound requires 1 <= n <= d");
  const double sn = std::sqrt(static_cast<double>(n));
  return (1.0 + 1.0 / std::sqrt(static_cast<double>(d))) * (1.0 + (sn - 1.0) / (sn + 1.0));
}

SteeringWitness mub_witness(int d) {
  if (d < 2 || d > kMaxDim) throw InvalidArgs("mub_witness dimension out of range");
  SteeringWitness w;
  w.mA = 2;
  w.nA = d;
  w.dim = d;
  w.operators.resize(2 * static_cast<std::size_t>(d));
  const Matrix fourier = fourier_basis(d);
  for (int a = 0; a < d; ++a) {
    w.operators[a] = projector(Vector::Unit(d, a));
    w.operators[static_cast<std::size_t>(d) + a] =
        projector(fourier.col(a)).transpose().eval();
  }
  w.lhs_bound = schmidt_bound(d, 1);
  w.schmidt_bounds.resize(d);
  for (int n = 1; n <= d; ++n) w.schmidt_bounds[n - 1] = schmidt_bound(d, n);
  return w;
}

CertificationReport certification_report(const Assemblage& assemblage,
                                         const SteeringWitness& witness, AdjustMode mode,
                                         const solver::Settings& settings) {
  witness.validate();
  CertificationReport report;
  report.value = evaluate_witness(assemblage, witness);
  report.gamma = gamma_from_assemblage(assemblage, settings);
  if (witness.schmidt_bounds.empty())
    throw InvalidArgs("witness carries no Schmidt-number bounds");

  const int d = static_cast<int>(witness.schmidt_bounds.size());
  for (int n = 1; n <= d; ++n) {
    if (report.value > witness.schmidt_bounds[n - 1]) report.certified_sn = std::min(n + 1, d);
    if (report.value > adjusted_bound(witness.schmidt_bounds[n - 1], witness.mA, report.gamma,
                                      mode))
      report.adjusted_certified_sn = std::min(n + 1, d);
  }
  return report;
}

}  // namespace sigbell
