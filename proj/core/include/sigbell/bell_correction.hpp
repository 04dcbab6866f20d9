#pragma once

#include <vector>

#include "sigbell/scenario.hpp"

namespace sigbell {

/// Signalling-corrected bound of a full-correlation dichotomic Bell
/// inequality. The correction minimizes over reference-setting tuples; the
/// objective separates per setting, so each tuple entry is optimized
/// independently.
struct CorrectedBound {
  double base = 0.0;
  double correction = 0.0;
  double total = 0.0;
  std::vector<int> y_tuple;  // minimizing reference y for each x
  std::vector<int> x_tuple;  // minimizing reference x for each y
  /// Set when the corrected bound exceeds the algebraic maximum
  /// sum |c_xy|, making the certificate uninformative.
  bool vacuous = false;
  double algebraic_max = 0.0;
};

/// c is the [x][y] coefficient table of the inequality sum c_xy E_xy with
/// LHV bound w_lhv; the budget must describe a dichotomic scenario.
CorrectedBound corrected_full_correlation_bound(const std::vector<double>& c, double w_lhv,
                                                const SignallingBudget& budget);

/// 2 + 2 sum_x alpha[0][x][0][1] + 2 sum_y beta[0][y][0][1] for a CHSH
/// scenario budget.
double corrected_chsh_bound(const SignallingBudget& budget);

/// CHSH coefficients c = [[1,1],[1,-1]] in the [x][y] layout.
std::vector<double> chsh_coefficients();

}  // namespace sigbell
