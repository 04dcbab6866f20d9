#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigbell/errors.hpp"

namespace sigbell {

/// A bipartite Bell scenario: mA/mB measurement settings and nA/nB outcomes
/// per party.
struct Scenario {
  int mA = 0;
  int mB = 0;
  int nA = 0;
  int nB = 0;

  Scenario() = default;
  Scenario(int m_a, int m_b, int n_a, int n_b);

  bool operator==(const Scenario&) const = default;

  /// (nA^(mA*mB)) * (nB^(mA*mB)): the number of deterministic joint
  /// strategies when responses may depend on both settings. Empty when the
  /// value does not fit in 64 bits.
  std::optional<std::uint64_t> strategy_space_size() const;

  int cells() const { return mA * mB; }
  int outcome_pairs() const { return nA * nB; }

  static Scenario chsh() { return Scenario(2, 2, 2, 2); }
};

/// Joint conditional probability table p(a,b|x,y), stored row-major in the
/// canonical index order [x][y][a][b].
class Behavior {
 public:
  Behavior(Scenario scenario, std::vector<double> p);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<double>& table() const { return p_; }

  std::size_t index(int x, int y, int a, int b) const {
    return ((static_cast<std::size_t>(x) * scenario_.mB + y) * scenario_.nA + a) * scenario_.nB +
           b;
  }
  double operator()(int x, int y, int a, int b) const { return p_[index(x, y, a, b)]; }

  /// p(a|x,y) = sum_b p(a,b|x,y)
  double marginal_a(int a, int x, int y) const;
  /// p(b|x,y) = sum_a p(a,b|x,y)
  double marginal_b(int b, int x, int y) const;

  /// Tolerance below which ingested negative entries are clamped to zero.
  static constexpr double kNegativeClamp = 1e-9;
  /// Maximum allowed deviation of a cell's total probability from one.
  static constexpr double kNormalizationTol = 1e-6;

 private:
  Scenario scenario_;
  std::vector<double> p_;
};

/// Bounds on the average ontological signalling: alpha[a][x][y][y'] limits
/// changes of Alice's response marginals across Bob's settings, and
/// beta[b][y][x][x'] the converse. Symmetric in the trailing setting pair,
/// zero on the diagonal.
struct SignallingBudget {
  Scenario scenario;
  std::vector<double> alpha;  // [a][x][y][y']
  std::vector<double> beta;   // [b][y][x][x']

  std::size_t alpha_index(int a, int x, int y, int yp) const {
    return ((static_cast<std::size_t>(a) * scenario.mA + x) * scenario.mB + y) * scenario.mB + yp;
  }
  std::size_t beta_index(int b, int y, int x, int xp) const {
    return ((static_cast<std::size_t>(b) * scenario.mB + y) * scenario.mA + x) * scenario.mA + xp;
  }
  double alpha_at(int a, int x, int y, int yp) const { return alpha[alpha_index(a, x, y, yp)]; }
  double beta_at(int b, int y, int x, int xp) const { return beta[beta_index(b, y, x, xp)]; }

  double max_entry() const;

  /// Entrywise comparison (true when every entry of *this <= other).
  bool entrywise_leq(const SignallingBudget& other, double tol = 0.0) const;

  static SignallingBudget zero(const Scenario& s);
  static SignallingBudget uniform(const Scenario& s, double value);

  /// Checks symmetry, zero diagonal and the [0,1] range.
  void validate() const;
};

/// Raw event counts over the outcome alphabet extended with a no-click
/// symbol. Index order [x][y][a~][b~] where a~ == nA (b~ == nB) encodes the
/// no-click outcome.
class CountsTable {
 public:
  CountsTable(Scenario scenario, std::vector<std::int64_t> counts);

  const Scenario& scenario() const { return scenario_; }

  std::size_t index(int x, int y, int at, int bt) const {
    return ((static_cast<std::size_t>(x) * scenario_.mB + y) * (scenario_.nA + 1) + at) *
               (scenario_.nB + 1) +
           bt;
  }
  std::int64_t operator()(int x, int y, int at, int bt) const { return counts_[index(x, y, at, bt)]; }
  const std::vector<std::int64_t>& table() const { return counts_; }

  int no_click_a() const { return scenario_.nA; }
  int no_click_b() const { return scenario_.nB; }

 private:
  Scenario scenario_;
  std::vector<std::int64_t> counts_;
};

/// Outcome of a no-signalling check.
struct NoSignallingReport {
  double max_deviation = 0.0;
  bool compliant = true;
  /// Worst marginal pair: party 'A' compares p(a|x,y) vs p(a|x,y');
  /// party 'B' compares p(b|x,y) vs p(b|x',y).
  struct WorstEntry {
    char party = 'A';
    int outcome = 0;
    int setting = 0;       // the fixed local setting
    int other_first = 0;   // first remote setting of the compared pair
    int other_second = 0;  // second remote setting of the compared pair
  } worst;
};

NoSignallingReport check_no_signalling(const Behavior& behavior, double tol);

/// alpha[a][x][y][y'] = |p(a|x,y) - p(a|x,y')| + slack, clamped to [0,1]
/// (and the analogue for beta). Slack must be nonnegative.
SignallingBudget estimate_budgets(const Behavior& behavior, double slack = 0.0);

struct IngestResult {
  Behavior behavior;
  std::vector<double> eta_a;  // [a][x]
  std::vector<double> eta_b;  // [b][y]
  /// Largest spread of a per-setting efficiency estimate across the remote
  /// party's settings; a warning-level diagnostic.
  double max_efficiency_spread = 0.0;

  std::size_t eta_a_index(int a, int x, int m_a) const {
    return static_cast<std::size_t>(a) * m_a + x;
  }
};

/// Post-selected relative frequencies plus per-outcome detection-efficiency
/// estimates. Throws EmptyCell when a cell has no successful joint event.
IngestResult behavior_from_counts(const CountsTable& counts);

/// Full-correlation Bell value sum_{x,y} c[x][y] * E_xy for dichotomic
/// outcomes, with E_xy = sum_{a,b} (-1)^(a+b) p(a,b|x,y).
double bell_value(const Behavior& behavior, const std::vector<double>& coefficients);

/// Correlator table E_xy (requires nA == nB == 2).
std::vector<double> correlators(const Behavior& behavior);

}  // namespace sigbell
