#include "sigbell/bell_correction.hpp"

#include <cmath>
#include <limits>

namespace sigbell {

CorrectedBound corrected_full_correlation_bound(const std::vector<double>& c, double w_lhv,
                                                const SignallingBudget& budget) {
  const Scenario& s = budget.scenario;
  if (s.nA != 2 || s.nB != 2)
    throw NotDichotomic("full-correlation correction requires two outcomes per party");
  if (c.size() != static_cast<std::size_t>(s.mA) * s.mB)
    throw DimensionMismatch("coefficient table must be mA x mB");
  budget.validate();

  CorrectedBound result;
  result.base = w_lhv;
  result.y_tuple.resize(s.mA);
  result.x_tuple.resize(s.mB);

  auto abs_c = [&](int x, int y) { return std::abs(c[static_cast<std::size_t>(x) * s.mB + y]); };

  // For each x, pick the reference setting u minimizing
  // sum_y |c_xy| sum_a alpha[a][x][y][u]; the beta part is symmetric.
  for (int x = 0; x < s.mA; ++x) {
    double best = std::numeric_limits<double>::infinity();
    int best_u = 0;
    for (int u = 0; u < s.mB; ++u) {
      double value = 0.0;
      for (int y = 0; y < s.mB; ++y)
        for (int a = 0; a < s.nA; ++a) value += abs_c(x, y) * budget.alpha_at(a, x, y, u);
      if (value < best) {
        best = value;
        best_u = u;
      }
    }
    result.correction += best;
    result.y_tuple[x] = best_u;
  }
  for (int y = 0; y < s.mB; ++y) {
    double best = std::numeric_limits<double>::infinity();
    int best_u = 0;
    for (int u = 0; u < s.mA; ++u) {
      double value = 0.0;
      for (int x = 0; x < s.mA; ++x)
        for (int b = 0; b < s.nB; ++b) value += abs_c(x, y) * budget.beta_at(b, y, x, u);
      if (value < best) {
        best = value;
        best_u = u;
      }
    }
    result.correction += best;
    result.x_tuple[y] = best_u;
  }

  result.total = result.base + result.correction;
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y) result.algebraic_max += abs_c(x, y);
  result.vacuous = result.total > result.algebraic_max;
  return result;
}

double corrected_chsh_bound(const SignallingBudget& budget) {
  const Scenario& s = budget.scenario;
  if (s.mA != 2 || s.mB != 2 || s.nA != 2 || s.nB != 2)
    throw InvalidArgs("corrected_chsh_bound requires a CHSH scenario budget");
  budget.validate();
  // Accumulated in the same order as the general tuple minimization so the
  // two routes agree to the last bit on outcome-symmetric budgets.
  double correction = 0.0;
  for (int x = 0; x < 2; ++x) correction += 2.0 * budget.alpha_at(0, x, 0, 1);
  for (int y = 0; y < 2; ++y) correction += 2.0 * budget.beta_at(0, y, 0, 1);
  return 2.0 + correction;
}

std::vector<double> chsh_coefficients() { return {1.0, 1.0, 1.0, -1.0}; }

}  // namespace sigbell
