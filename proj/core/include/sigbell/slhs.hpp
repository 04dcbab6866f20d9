#pragma once

#include <optional>
#include <vector>

#include "sigbell/qlinalg.hpp"
#include "sigbell/solver/conic.hpp"

namespace sigbell::slhs {

inline constexpr std::uint64_t kDefaultResponseCap = 1ull << 16;

/// All deterministic response functions x -> a in lexicographic order
/// (setting 0 is the least significant digit).
std::vector<std::vector<int>> enumerate_response_functions(
    int m_a, int n_a, std::uint64_t cap = kDefaultResponseCap);

/// Certificate for membership in the signalling-bounded hidden-state set.
/// gamma_min is the smallest admissible signalling parameter of any model
/// reproducing the assemblage; membership at level gamma holds iff
/// gamma_min <= gamma (within tolerance).
struct SlhsCertificate {
  bool feasible = false;
  double gamma = 0.0;
  double gamma_min = 0.0;
  std::vector<Matrix> hidden;  // sigma~[lambda][x], flattened lambda*mA + x
  std::vector<Matrix> z_ops;   // [lambda]
  std::vector<double> p_lambda;
  /// Separating functional F[a|x] (flattened x*nA + a), present when the
  /// verdict is negative: sum tr(F sigma) reaches the certified lower
  /// bound on gamma_min (gamma_min up to the sandwich width) while every
  /// member of the set stays at or below gamma.
  std::vector<Matrix> witness;
  double witness_margin = 0.0;  // gamma_min - gamma
  solver::Status status = solver::Status::NumericalFailure;
};

SlhsCertificate slhs_membership(const Assemblage& assemblage, double gamma,
                                const solver::Settings& settings =
                                    solver::Settings::from_env());

struct RobustnessResult {
  double value = 0.0;
  SlhsCertificate certificate;  // model of the noise-mixed assemblage
  /// Optimal mixing assemblage for the generalized measure (empty when the
  /// robustness is zero or for the white-noise variant).
  std::optional<Assemblage> noise;
  bool white_noise = false;
  solver::Status status = solver::Status::NumericalFailure;
};

/// Minimal r >= 0 with (sigma + r*tau)/(1+r) in the set for some assemblage
/// tau (generalized robustness, Appendix-style barred variables).
RobustnessResult slhs_robustness(const Assemblage& assemblage, double gamma,
                                 const solver::Settings& settings =
                                     solver::Settings::from_env());

/// Minimal eps >= 0 with (sigma + eps*I/(d*nA))/(1+eps) in the set; the
/// noise direction is the maximally mixed assemblage.
RobustnessResult slhs_white_noise_robustness(const Assemblage& assemblage, double gamma,
                                             const solver::Settings& settings =
                                                 solver::Settings::from_env());

struct SteeringReport {
  double pg = 0.0;
  double sr = 0.0;
  double sr_whitenoise = 0.0;
  double gamma = 0.0;
  solver::Status status = solver::Status::NumericalFailure;
};

/// Guessing probability of the reduced states plus both robustness values
/// at gamma equal to that guessing probability.
SteeringReport table1_pipeline(const Assemblage& assemblage,
                               const solver::Settings& settings =
                                   solver::Settings::from_env());

}  // namespace sigbell::slhs
