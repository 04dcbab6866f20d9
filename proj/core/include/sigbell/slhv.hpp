#pragma once

#include <cstdint>
#include <vector>

#include "sigbell/scenario.hpp"
#include "sigbell/solver/conic.hpp"

namespace sigbell::slhv {

inline constexpr std::uint64_t kDefaultStrategyCap = 1ull << 20;

/// A deterministic joint response: both parties may read both settings.
/// Signalling cost tables are 0/1 constants fixed by the responses.
struct DeterministicStrategy {
  std::vector<std::uint8_t> d_a;  // [x*mB+y] -> a
  std::vector<std::uint8_t> d_b;  // [x*mB+y] -> b
  std::vector<std::uint8_t> alpha_cost;  // [a][x][y][y'], budget index order
  std::vector<std::uint8_t> beta_cost;   // [b][y][x][x']

  int a_of(int x, int y, int m_b) const { return d_a[static_cast<std::size_t>(x) * m_b + y]; }
  int b_of(int x, int y, int m_b) const { return d_b[static_cast<std::size_t>(x) * m_b + y]; }
};

struct StrategySet {
  Scenario scenario;
  std::vector<DeterministicStrategy> strategies;
};

/// All deterministic strategies in lexicographic order: Alice's response
/// varies fastest, each response encoded base-n over (x,y) pairs with the
/// pair (0,0) as the least significant digit. Throws TooLarge beyond cap.
StrategySet enumerate_strategies(const Scenario& scenario,
                                 std::uint64_t cap = kDefaultStrategyCap);

struct VisibilityResult {
  double v = 0.0;
  /// Sparse distribution over strategy indices (nonzero weights only).
  std::vector<std::pair<std::size_t, double>> weights;
  solver::Status status = solver::Status::NumericalFailure;
  double feas_tol = 0.0;
  double gap_tol = 0.0;
  double max_residual = 0.0;
};

/// Largest v in [0,1] with v*p + (1-v)/(nA*nB) reproducible by a
/// budget-constrained mixture of deterministic strategies.
VisibilityResult visibility(const Behavior& behavior, const SignallingBudget& budget,
                            const solver::Settings& settings = solver::Settings::from_env());

/// A Bell-type inequality sum c*p >= bound valid for every model within
/// the budget it was derived against. d and e carry the budget-row
/// multipliers (stored on the y < y' / x < x' slots).
struct SignallingBellInequality {
  Scenario scenario;
  std::vector<double> c;  // [a][b][x][y]
  double mu = 0.0;
  std::vector<double> d;  // [a][x][y][y']
  std::vector<double> e;  // [b][y][x][x']
  double bound = 0.0;

  std::size_t c_index(int a, int b, int x, int y) const {
    return ((static_cast<std::size_t>(a) * scenario.nB + b) * scenario.mA + x) * scenario.mB +
           y;
  }
  /// sum_{a,b,x,y} c * p(a,b|x,y)
  double evaluate(const Behavior& behavior) const;
  /// mu - sum d*alpha - sum e*beta for an arbitrary budget.
  double bound_for(const SignallingBudget& budget) const;
};

struct DualVisibilityResult {
  double objective = 0.0;
  SignallingBellInequality inequality;
  solver::Status status = solver::Status::NumericalFailure;
};

/// Dual of the visibility program; the extracted inequality is violated by
/// the tested behavior exactly when the primal visibility is below one.
DualVisibilityResult dual_visibility(const Behavior& behavior, const SignallingBudget& budget,
                                     const solver::Settings& settings =
                                         solver::Settings::from_env());

/// A vertex of the budget-feasible weight polytope, picked by maximizing a
/// seeded random objective; returns the mixed behavior it induces.
Behavior sample_slhv(const Scenario& scenario, const SignallingBudget& budget,
                     std::uint64_t seed,
                     const solver::Settings& settings = solver::Settings::from_env());

/// Shared enumeration for repeated solves against one scenario.
VisibilityResult visibility(const StrategySet& strategies, const Behavior& behavior,
                            const SignallingBudget& budget, const solver::Settings& settings);
DualVisibilityResult dual_visibility(const StrategySet& strategies, const Behavior& behavior,
                                     const SignallingBudget& budget,
                                     const solver::Settings& settings);
Behavior sample_slhv(const StrategySet& strategies, const SignallingBudget& budget,
                     std::uint64_t seed, const solver::Settings& settings);

}  // namespace sigbell::slhv
