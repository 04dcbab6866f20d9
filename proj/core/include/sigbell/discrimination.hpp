#pragma once

#include <vector>

#include "sigbell/qlinalg.hpp"
#include "sigbell/solver/conic.hpp"

namespace sigbell {

/// Minimum-error discrimination of equiprobable states.
struct GuessingResult {
  double pg = 0.0;
  std::vector<Matrix> povm;  // primal optimizer, one element per state
  Matrix dual_z;             // dual certificate: Z >= sigma_x / m for all x
  double gap = 0.0;          // |primal - dual|
  solver::Status status = solver::Status::NumericalFailure;
};

/// Solves both the POVM maximization and the dual trace minimization and
/// cross-checks them; rejects solutions whose primal-dual gap exceeds 1e-5.
GuessingResult guessing_probability(const std::vector<Matrix>& states,
                                    const solver::Settings& settings =
                                        solver::Settings::from_env());

/// Two-state closed form 1/2 + 1/2 || rho1/2 - rho2/2 ||_1.
double helstrom(const Matrix& rho1, const Matrix& rho2);

/// Guessing probability of the reduced states mu_x = sum_a sigma_{a|x};
/// uses the Helstrom form for two settings and the SDP otherwise.
double gamma_from_assemblage(const Assemblage& assemblage,
                             const solver::Settings& settings = solver::Settings::from_env());

}  // namespace sigbell
