#include "sigbell/postselect.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "sigbell/bell_correction.hpp"
#include "sigbell/slhv.hpp"

namespace sigbell::postselect {

void DetectorModel::validate() const {
  if (mA < 1 || mB < 1 || nA < 1 || nB < 1) throw InvalidArgs("detector model dimensions");
  if (eta_a.size() != static_cast<std::size_t>(nA) * mA ||
      eta_b.size() != static_cast<std::size_t>(nB) * mB)
    throw DimensionMismatch("efficiency table sizes do not match the scenario");
  for (double e : eta_a)
    if (e < 0.0 || e > 1.0) throw InvalidArgs("efficiency outside [0,1]");
  for (double e : eta_b)
    if (e < 0.0 || e > 1.0) throw InvalidArgs("efficiency outside [0,1]");
}

DetectorModel DetectorModel::outcome_only(double eta0, double eta1) {
  DetectorModel m;
  m.mA = m.mB = m.nA = m.nB = 2;
  m.eta_a = {eta0, eta0, eta1, eta1};
  m.eta_b = {eta0, eta0, eta1, eta1};
  m.validate();
  return m;
}

std::vector<Matrix> inefficient_povm(const std::vector<Matrix>& povm,
                                     const std::vector<double>& eta) {
  if (povm.empty()) throw InvalidArgs("empty POVM");
  if (eta.size() != povm.size()) throw DimensionMismatch("one efficiency per outcome required");
  const int dim = static_cast<int>(povm.front().rows());
  std::vector<Matrix> out;
  out.reserve(povm.size() + 1);
  Matrix clicked = Matrix::Zero(dim, dim);
  for (std::size_t a = 0; a < povm.size(); ++a) {
    if (eta[a] < 0.0 || eta[a] > 1.0) throw InvalidArgs("efficiency outside [0,1]");
    out.push_back(eta[a] * povm[a]);
    clicked += out.back();
  }
  out.push_back(Matrix::Identity(dim, dim) - clicked);
  return out;
}

namespace {

constexpr double kMinCoincidence = 1e-12;

PostselectResult postselect_joint_table(const Scenario& s, const std::vector<double>& joint,
                                        const DetectorModel& detector) {
  std::vector<double> p(joint.size(), 0.0);
  std::vector<double> normalization(static_cast<std::size_t>(s.mA) * s.mB, 0.0);
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y) {
      double n_xy = 0.0;
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) {
          const std::size_t idx =
              ((static_cast<std::size_t>(x) * s.mB + y) * s.nA + a) * s.nB + b;
          const double weighted =
              detector.eta_a_at(a, x) * detector.eta_b_at(b, y) * joint[idx];
          p[idx] = weighted;
          n_xy += weighted;
        }
      if (n_xy <= kMinCoincidence)
        throw AllNoClick("cell (" + std::to_string(x) + "," + std::to_string(y) +
                         ") retains no coincidences");
      normalization[static_cast<std::size_t>(x) * s.mB + y] = n_xy;
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b)
          p[((static_cast<std::size_t>(x) * s.mB + y) * s.nA + a) * s.nB + b] /= n_xy;
    }
  Behavior behavior(s, std::move(p));
  SignallingBudget budgets = estimate_budgets(behavior, 0.0);
  return {std::move(behavior), std::move(normalization), std::move(budgets)};
}

}  // namespace

PostselectResult postselect_table(const Behavior& ideal, const DetectorModel& detector) {
  detector.validate();
  const Scenario& s = ideal.scenario();
  if (detector.mA != s.mA || detector.mB != s.mB || detector.nA != s.nA || detector.nB != s.nB)
    throw DimensionMismatch("detector model does not match the behavior scenario");
  return postselect_joint_table(s, ideal.table(), detector);
}

PostselectResult postselected_behavior(const Matrix& state, const MeasurementFamily& alice,
                                       const MeasurementFamily& bob,
                                       const DetectorModel& detector) {
  detector.validate();
  const Behavior ideal = behavior_from_state(state, alice, bob);
  return postselect_table(ideal, detector);
}

double chsh_postselected(double eta0, double eta1) {
  if (eta0 < 0.0 || eta0 > 1.0 || eta1 < 0.0 || eta1 > 1.0)
    throw InvalidArgs("efficiencies must lie in [0,1]");
  const double s2 = std::numbers::sqrt2;
  const double e04 = std::pow(eta0, 4), e13 = std::pow(eta1, 3);
  const double e03 = std::pow(eta0, 3), e14 = std::pow(eta1, 4);
  const double num = 2.0 * (e04 + 16.0 * s2 * eta1 * e03 - 2.0 * eta1 * eta1 * eta0 * eta0 +
                            16.0 * s2 * e13 * eta0 + e14);
  const double den =
      e04 + 12.0 * eta1 * e03 + 6.0 * eta1 * eta1 * eta0 * eta0 + 12.0 * e13 * eta0 + e14;
  if (den <= 0.0) throw AllNoClick("no coincidences at these efficiencies");
  return num / den;
}

double alpha_postselected(double eta0, double eta1, Variant variant) {
  if (eta0 < 0.0 || eta0 > 1.0 || eta1 < 0.0 || eta1 > 1.0)
    throw InvalidArgs("efficiencies must lie in [0,1]");
  const double s = variant == Variant::Quantum ? std::numbers::sqrt2 : 2.0;
  const double sum = eta0 + eta1;
  const double diff = eta0 - eta1;
  const double den_minus = sum * sum - diff * diff / s;
  const double den_plus = sum * sum + diff * diff / s;
  if (den_minus <= 0.0 || den_plus <= 0.0)
    throw AllNoClick("no coincidences at these efficiencies");
  return eta1 * std::abs((sum + diff / s) / den_minus - (sum - diff / s) / den_plus);
}

std::vector<ScanRow> scan_grid(Variant strategy, const GridSpec& grid, BudgetMode budget_mode,
                               int jobs, const solver::Settings& settings) {
  if (grid.points < 2 || grid.min <= 0.0 || grid.max > 1.0 || grid.min >= grid.max)
    throw InvalidArgs("grid must satisfy 0 < min < max <= 1 with at least two points");

  const Behavior ideal = standard_behavior(strategy == Variant::Quantum
                                               ? StandardBehavior::IdealQuantumChsh
                                               : StandardBehavior::LocalCorr);
  const slhv::StrategySet strategies = slhv::enumerate_strategies(Scenario::chsh());
  const std::vector<double> chsh_c = chsh_coefficients();

  std::vector<double> etas(grid.points);
  for (int i = 0; i < grid.points; ++i)
    etas[i] = grid.min + (grid.max - grid.min) * i / (grid.points - 1);

  std::vector<ScanRow> rows(static_cast<std::size_t>(grid.points) * grid.points);
  auto evaluate_point = [&](std::size_t index) {
    const double eta0 = etas[index / grid.points];
    const double eta1 = etas[index % grid.points];
    ScanRow& row = rows[index];
    row.eta0 = eta0;
    row.eta1 = eta1;
    try {
      const PostselectResult ps =
          postselect_table(ideal, DetectorModel::outcome_only(eta0, eta1));
      row.chsh = bell_value(ps.behavior, chsh_c);
      row.max_signalling = ps.budgets.max_entry();
      const SignallingBudget& budget =
          budget_mode == BudgetMode::Data ? ps.budgets
                                          : SignallingBudget::zero(ps.behavior.scenario());
      row.visibility = slhv::visibility(strategies, ps.behavior, budget, settings).v;
    } catch (const Error& e) {
      row.status = e.what();
    }
  };

  const std::size_t total = rows.size();
  if (jobs <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate_point(i);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    const int count = std::min<int>(jobs, static_cast<int>(total));
    for (int t = 0; t < count; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          evaluate_point(i);
      });
    for (auto& worker : workers) worker.join();
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "eta0,eta1,chsh,visibility,max_signalling,status\n";
  out.imbue(std::locale::classic());
  for (const auto& row : rows) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%s\n", row.eta0, row.eta1,
                  row.chsh, row.visibility, row.max_signalling, row.status.c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace sigbell::postselect
