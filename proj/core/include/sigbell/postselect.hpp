#pragma once

#include <string>
#include <vector>

#include "sigbell/qlinalg.hpp"
#include "sigbell/scenario.hpp"
#include "sigbell/solver/conic.hpp"

namespace sigbell::postselect {

/// Per-outcome, per-setting detection efficiencies.
struct DetectorModel {
  int mA = 0, mB = 0, nA = 0, nB = 0;
  std::vector<double> eta_a;  // [a][x]
  std::vector<double> eta_b;  // [b][y]

  double eta_a_at(int a, int x) const { return eta_a[static_cast<std::size_t>(a) * mA + x]; }
  double eta_b_at(int b, int y) const { return eta_b[static_cast<std::size_t>(b) * mB + y]; }
  void validate() const;

  /// CHSH-scenario model where the efficiency depends only on the outcome
  /// and is shared by both parties and all settings.
  static DetectorModel outcome_only(double eta0, double eta1);
};

/// One inefficient measurement setting: elements eta_a * M_a followed by the
/// no-click element I - sum_a eta_a * M_a.
std::vector<Matrix> inefficient_povm(const std::vector<Matrix>& povm,
                                     const std::vector<double>& eta);

struct PostselectResult {
  Behavior behavior;
  std::vector<double> normalization;  // N[x][y], row-major
  SignallingBudget budgets;           // data-derived, zero slack
};

/// Post-selected behavior of a state measured with inefficient detectors;
/// throws AllNoClick when a cell retains essentially no coincidences.
PostselectResult postselected_behavior(const Matrix& state, const MeasurementFamily& alice,
                                       const MeasurementFamily& bob,
                                       const DetectorModel& detector);

/// Probability-table form of the same post-selection (exact, no operators).
PostselectResult postselect_table(const Behavior& ideal, const DetectorModel& detector);

/// Closed-form CHSH value of the post-selected maximal quantum strategy.
double chsh_postselected(double eta0, double eta1);

enum class Variant { Quantum, Local };

/// Closed form of the only nonvanishing signalling parameter of the
/// post-selected outcome-efficiency strategies; the local variant replaces
/// sqrt(2) by 2.
double alpha_postselected(double eta0, double eta1, Variant variant);

enum class BudgetMode { Data, Zero };

struct GridSpec {
  int points = 21;
  double min = 0.5;
  double max = 1.0;
};

struct ScanRow {
  double eta0 = 0.0;
  double eta1 = 0.0;
  double chsh = 0.0;
  double visibility = 0.0;
  double max_signalling = 0.0;
  std::string status = "ok";
};

/// Visibility scan over an efficiency grid. Rows are ordered by (eta0,
/// eta1) ascending; per-point failures land in the row status instead of
/// aborting the scan. jobs > 1 evaluates grid points concurrently.
std::vector<ScanRow> scan_grid(Variant strategy, const GridSpec& grid, BudgetMode budget_mode,
                               int jobs = 1,
                               const solver::Settings& settings = solver::Settings::from_env());

std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace sigbell::postselect
