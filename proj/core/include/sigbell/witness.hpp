#pragma once

#include <optional>
#include <vector>

#include "sigbell/qlinalg.hpp"
#include "sigbell/solver/conic.hpp"

namespace sigbell {

/// Linear steering witness sum_{a,x} tr(sigma[a|x] W[a|x]) with PSD
/// operators, an unsteerable-model bound and optional Schmidt-number
/// bounds (index n-1 holds the bound for Schmidt number at most n).
struct SteeringWitness {
  int mA = 0;
  int nA = 0;
  int dim = 0;
  std::vector<Matrix> operators;  // [x][a] flattened x*nA + a
  double lhs_bound = 0.0;
  std::vector<double> schmidt_bounds;

  const Matrix& at(int a, int x) const { return operators[static_cast<std::size_t>(x) * nA + a]; }
  void validate() const;
};

double evaluate_witness(const Assemblage& assemblage, const SteeringWitness& witness);

enum class AdjustMode { Tight, Paper };

/// Signalling adjustment of a linear steering bound. Paper mode scales by
/// (1 + mA*gamma); tight mode by (1 + max(0, mA*gamma - 1)), which recovers
/// the unadjusted bound at the no-signalling point gamma = 1/mA.
double adjusted_bound(double lhs_bound, int m_a, double gamma, AdjustMode mode = AdjustMode::Tight);

/// (1 + 1/sqrt(d)) * (1 + (sqrt(n)-1)/(sqrt(n)+1)) for 1 <= n <= d.
double schmidt_bound(int d, int n);

/// Two-setting witness from the transposed pair {computational, Fourier}:
/// computational projectors and entrywise-conjugated Fourier projectors.
SteeringWitness mub_witness(int d);

struct CertificationReport {
  double value = 0.0;
  double gamma = 0.0;
  /// Largest n+1 with value > L_{SN<=n}; empty when not even entanglement
  /// (Schmidt number 2) is certified.
  std::optional<int> certified_sn;
  std::optional<int> adjusted_certified_sn;
};

CertificationReport certification_report(const Assemblage& assemblage,
                                         const SteeringWitness& witness,
                                         AdjustMode mode = AdjustMode::Tight,
                                         const solver::Settings& settings =
                                             solver::Settings::from_env());

}  // namespace sigbell
