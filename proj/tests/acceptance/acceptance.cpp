// Acceptance suite: each numbered criterion prints one PASS/FAIL line.
// The process exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sigbell/bell_correction.hpp"
#include "sigbell/discrimination.hpp"
#include "sigbell/postselect.hpp"
#include "sigbell/qlinalg.hpp"
#include "sigbell/scenario.hpp"
#include "sigbell/slhs.hpp"
#include "sigbell/slhv.hpp"
#include "sigbell/witness.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sigbell;
namespace ps = sigbell::postselect;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

Assemblage isotropic_pauli(double v) {
  return assemblage_from(isotropic_state(2, v), pauli_measurements());
}

// Setting-dependent conjugation: a no-signalling assemblage made
// signalling while staying positive and normalized.
Assemblage conjugated(const Assemblage& base, double strength, std::uint64_t seed) {
  auto gen = testing::rng(seed);
  Assemblage out = base;
  for (int x = 0; x < base.mA; ++x) {
    const Matrix dir = projector(testing::random_unit_vector(base.dim, gen));
    const Matrix tau =
        Matrix::Identity(base.dim, base.dim) + strength * (dir - identity(base.dim) / 2.0);
    const Matrix root = sqrt_psd(tau);
    double norm = 0.0;
    std::vector<Matrix> blocks(base.nA);
    for (int a = 0; a < base.nA; ++a) {
      blocks[a] = root * base.at(a, x) * root;
      norm += blocks[a].real().trace();
    }
    for (int a = 0; a < base.nA; ++a) out.at(a, x) = blocks[a] / norm;
  }
  return out;
}

void criterion_1(const slhv::StrategySet& set) {
  Timer timer;
  const auto r = slhv::visibility(set, standard_behavior(StandardBehavior::IdealQuantumChsh),
                                  SignallingBudget::zero(Scenario::chsh()), {});
  const double elapsed = timer.seconds();
  const bool pass = std::abs(r.v - 0.707107) <= 1e-4 && elapsed < 5.0;
  report(1, pass, fmt("Tsirelson visibility %.6f (target 0.707107 +- 1e-4), %.2fs", r.v, elapsed));
}

void criterion_2(const slhv::StrategySet& set) {
  const Behavior pr = standard_behavior(StandardBehavior::PrBox);
  const double v_zero = slhv::visibility(set, pr, SignallingBudget::zero(Scenario::chsh()), {}).v;
  const double v_full =
      slhv::visibility(set, pr, SignallingBudget::uniform(Scenario::chsh(), 1.0), {}).v;
  const bool pass = std::abs(v_zero - 0.5) <= 1e-4 && v_full >= 1.0 - 1e-6;
  report(2, pass, fmt("PR box: v(zero budget) = %.6f, v(saturated budget) = %.8f", v_zero, v_full));
}

void criterion_3(const slhv::StrategySet& set) {
  auto gen = testing::rng(301);
  double worst_gap = 0.0;
  double worst_violation = 0.0;
  bool pass = true;
  for (int i = 0; i < 50; ++i) {
    const Behavior b = testing::random_behavior(Scenario::chsh(), gen);
    const SignallingBudget budget =
        i % 2 == 0 ? estimate_budgets(b, 0.0) : testing::random_budget(Scenario::chsh(), gen, 0.2);
    const auto primal = slhv::visibility(set, b, budget, {});
    const auto dual = slhv::dual_visibility(set, b, budget, {});
    worst_gap = std::max(worst_gap, std::abs(primal.v - dual.objective));
    for (int k = 0; k < 100; ++k) {
      const Behavior sample = slhv::sample_slhv(set, budget, i * 1000 + k, {});
      worst_violation = std::max(
          worst_violation, dual.inequality.bound - dual.inequality.evaluate(sample));
    }
  }
  pass = worst_gap <= 1e-6 && worst_violation <= 1e-8;
  report(3, pass,
         fmt("50 behaviors: max primal-dual gap %.2e (<=1e-6), max certificate violation %.2e "
             "(<=1e-8) over 5000 samples",
             worst_gap, worst_violation));
}

void criterion_4() {
  auto gen = testing::rng(401);
  bool pass = true;
  for (int i = 0; i < 100 && pass; ++i) {
    SignallingBudget budget = testing::random_budget(Scenario::chsh(), gen, 0.4);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int yp = 0; yp < 2; ++yp)
          budget.alpha[budget.alpha_index(1, x, y, yp)] =
              budget.alpha[budget.alpha_index(0, x, y, yp)];
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x)
        for (int xp = 0; xp < 2; ++xp)
          budget.beta[budget.beta_index(1, y, x, xp)] =
              budget.beta[budget.beta_index(0, y, x, xp)];
    const double general =
        corrected_full_correlation_bound(chsh_coefficients(), 2.0, budget).total;
    if (general != corrected_chsh_bound(budget)) pass = false;
  }
  report(4, pass, "corrected CHSH bound equals the general tuple minimization exactly on 100 "
                  "outcome-symmetric budgets");
}

void criterion_5(const slhv::StrategySet& set) {
  auto gen = testing::rng(501);
  double worst = -1.0;
  for (int trial = 0; trial < 10; ++trial) {
    const SignallingBudget budget = testing::random_budget(Scenario::chsh(), gen, 0.3);
    const double bound = corrected_chsh_bound(budget);
    for (int k = 0; k < 100; ++k) {
      const Behavior b = slhv::sample_slhv(set, budget, trial * 10000 + k, {});
      worst = std::max(worst, bell_value(b, chsh_coefficients()) - bound);
    }
  }
  report(5, worst <= 1e-8,
         fmt("1000 sampled models: max excess over the corrected CHSH bound %.2e (<=1e-8)", worst));
}

void criterion_6() {
  bool pass = true;
  double worst_sym = 0.0, worst_cross = 0.0, worst_alpha = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double eta = 0.05 + 0.095 * i;
    worst_sym = std::max(worst_sym, std::abs(ps::chsh_postselected(eta, eta) - 2.0 * kSqrt2));
  }
  const Behavior ideal_q = standard_behavior(StandardBehavior::IdealQuantumChsh);
  const Behavior ideal_l = standard_behavior(StandardBehavior::LocalCorr);
  auto gen = testing::rng(601);
  std::uniform_real_distribution<double> eta_dist(0.05, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double e0 = eta_dist(gen), e1 = eta_dist(gen);
    const auto r = ps::postselect_table(ideal_q, ps::DetectorModel::outcome_only(e0, e1));
    worst_cross = std::max(worst_cross, std::abs(bell_value(r.behavior, chsh_coefficients()) -
                                                 ps::chsh_postselected(e0, e1)));
    const double oracle_q =
        std::abs(r.behavior.marginal_a(1, 1, 0) - r.behavior.marginal_a(1, 1, 1));
    worst_alpha = std::max(
        worst_alpha, std::abs(ps::alpha_postselected(e0, e1, ps::Variant::Quantum) - oracle_q));
    const auto rl = ps::postselect_table(ideal_l, ps::DetectorModel::outcome_only(e0, e1));
    const double oracle_l =
        std::abs(rl.behavior.marginal_a(1, 1, 0) - rl.behavior.marginal_a(1, 1, 1));
    worst_alpha = std::max(
        worst_alpha, std::abs(ps::alpha_postselected(e0, e1, ps::Variant::Local) - oracle_l));
  }
  pass = worst_sym <= 1e-12 && worst_cross <= 1e-10 && worst_alpha <= 1e-10;
  report(6, pass,
         fmt("closed forms: |W(eta,eta)-2sqrt2| %.1e (<=1e-12), vs direct %.1e (<=1e-10), alpha "
             "vs marginals %.1e (<=1e-10)",
             worst_sym, worst_cross, worst_alpha));
}

void criterion_7() {
  Timer timer;
  const auto rows = ps::scan_grid(ps::Variant::Local, {11, 0.5, 1.0}, ps::BudgetMode::Data, 4);
  const double elapsed = timer.seconds();
  double worst = 0.0;
  bool ok = true;
  for (const auto& row : rows) {
    if (row.status != "ok") ok = false;
    worst = std::max(worst, std::abs(row.visibility - 1.0));
  }
  const bool pass = ok && worst <= 1e-6 && elapsed < 120.0;
  report(7, pass,
         fmt("11x11 local scan: max |v-1| = %.2e (<=1e-6), %.1fs (<120s)", worst, elapsed));
}

void criterion_8() {
  // (a) reads off the zero-budget landscape, where off-diagonal points are
  // exactly irreproducible; (b) reads off the data-budget landscape of the
  // heat map, whose saturated region needs strong asymmetry, hence the grid
  // spans [0.1, 1].
  const ps::GridSpec grid{11, 0.1, 1.0};
  const auto zero_rows = ps::scan_grid(ps::Variant::Quantum, grid, ps::BudgetMode::Zero, 4);
  double diag_dev = 0.0, off_max = 0.0;
  for (const auto& row : zero_rows) {
    if (row.eta0 == row.eta1)
      diag_dev = std::max(diag_dev, std::abs(row.visibility - 0.707107));
    else
      off_max = std::max(off_max, row.visibility);
  }
  const bool pass_a = diag_dev <= 1e-4 && off_max <= 0.707107 + 1e-6;

  const auto data_rows = ps::scan_grid(ps::Variant::Quantum, grid, ps::BudgetMode::Data, 4);
  bool found_saturated = false;
  double data_diag_dev = 0.0;
  for (const auto& row : data_rows) {
    if (row.eta0 == row.eta1)
      data_diag_dev = std::max(data_diag_dev, std::abs(row.visibility - 0.707107));
    else if (row.chsh > 2.0 * kSqrt2 && row.visibility >= 1.0 - 1e-6)
      found_saturated = true;
  }
  const bool pass = pass_a && data_diag_dev <= 1e-4 && found_saturated;
  report(8, pass,
         fmt("zero budget: diagonal dev %.1e, off-diagonal max v %.4f (diagonal is the maximum); "
             "data budget: diagonal dev %.1e, post-quantum CHSH with v=1 found: %s",
             diag_dev, off_max, data_diag_dev, found_saturated ? "yes" : "no"));
}

void criterion_9() {
  auto gen = testing::rng(901);
  double worst_pair = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dim = i % 2 == 0 ? 2 : 3;
    const Matrix r1 = testing::random_state(dim, gen);
    const Matrix r2 = testing::random_state(dim, gen);
    worst_pair =
        std::max(worst_pair, std::abs(guessing_probability({r1, r2}).pg - helstrom(r1, r2)));
  }
  double worst_gamma = 0.0;
  for (double k : {0.0, 0.25, 0.5, 1.0}) {
    const double gamma = gamma_from_assemblage(qutrit_signalling_assemblage(0.8, k));
    worst_gamma = std::max(worst_gamma, std::abs(gamma - (1.0 + k) / 2.0));
  }
  const bool pass = worst_pair <= 1e-6 && worst_gamma <= 1e-6;
  report(9, pass,
         fmt("SDP vs Helstrom on 100 pairs: %.2e (<=1e-6); qutrit gamma vs (1+k)/2: %.2e (<=1e-6)",
             worst_pair, worst_gamma));
}

void criterion_10() {
  Timer timer;
  // Bisection of the white-noise feasibility boundary along the isotropic
  // family at the no-signalling level.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 20; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double eps = slhs::slhs_white_noise_robustness(isotropic_pauli(mid), 1.0 / 3.0).value;
    (eps <= 1e-7 ? lo : hi) = mid;
  }
  const double threshold = 0.5 * (lo + hi);
  const bool pass_threshold = std::abs(threshold - 0.5774) <= 2e-3;

  auto gen = testing::rng(1001);
  int matches = 0, total = 0;
  while (total < 20) {
    const Matrix rho = total % 3 == 2 ? testing::random_state(4, gen)
                                      : isotropic_state(2, 0.3 + 0.035 * total);
    MeasurementFamily meas;
    for (int x = 0; x < 3; ++x) meas.push_back(testing::random_projective(2, gen));
    const Assemblage a = assemblage_from(rho, meas);
    const double oracle_v = testing::lhs_critical_visibility(a);
    if (std::abs(oracle_v - 1.0) < 5e-3) continue;  // keep clear of the boundary
    ++total;
    const bool oracle = oracle_v >= 1.0 - 1e-6;
    const bool mine = slhs::slhs_membership(a, 1.0 / 3.0, {}).feasible;
    if (mine == oracle) ++matches;
  }
  const bool pass = pass_threshold && matches == 20;
  report(10, pass,
         fmt("white-noise bisection threshold %.4f (target 0.5774 +- 2e-3); verdicts vs "
             "no-signalling oracle %d/20, %.0fs",
             threshold, matches, timer.seconds()));
}

void criterion_11() {
  Timer timer;
  std::vector<Assemblage> suite;
  for (double v : {0.2, 0.45, 0.7, 0.85, 1.0}) suite.push_back(isotropic_pauli(v));
  for (double v : {0.3, 0.6, 0.9, 1.0}) {
    suite.push_back(conjugated(isotropic_pauli(v), 0.35, 1100 + static_cast<int>(10 * v)));
    suite.push_back(conjugated(isotropic_pauli(v), 0.7, 1200 + static_cast<int>(10 * v)));
  }
  for (double v : {0.25, 0.55, 0.8, 0.95})
    suite.push_back(conjugated(isotropic_pauli(v), 0.5, 1300 + static_cast<int>(100 * v)));
  for (double k : {0.15, 0.5, 0.9}) suite.push_back(qutrit_signalling_assemblage(0.75, k));

  bool monotone = true, consistent = true;
  for (const auto& a : suite) {
    const double gamma_lo = std::max(1.0 / a.mA, gamma_from_assemblage(a));
    const double gamma_hi = std::min(1.0, gamma_lo + 0.15);
    const double r_lo = slhs::slhs_robustness(a, gamma_lo).value;
    const double r_hi = slhs::slhs_robustness(a, gamma_hi).value;
    if (r_hi > r_lo + 1e-7) monotone = false;
    const bool member = slhs::slhs_membership(a, gamma_lo).feasible;
    if (member != (r_lo <= 1e-6)) consistent = false;
  }
  report(11, monotone && consistent,
         fmt("%zu assemblages: robustness non-increasing in gamma (%s), zero iff member (%s), "
             "%.0fs",
             suite.size(), monotone ? "yes" : "no", consistent ? "yes" : "no", timer.seconds()));
}

void criterion_12() {
  const double b1 = schmidt_bound(3, 1);
  const double b2 = schmidt_bound(3, 2);
  const double b3 = schmidt_bound(3, 3);
  const bool p1 = std::abs(b1 - 1.57735) <= 1e-5;
  const bool p2 = std::abs(b2 - 1.84776) <= 1e-5;
  const bool p3 = std::abs(b3 - 2.00000) <= 1e-5;
  report(12, p1 && p2 && p3,
         fmt("d=3 bounds %.6f / %.6f / %.6f vs pinned 1.57735 / 1.84776 / 2.00000 +- 1e-5%s", b1,
             b2, b3,
             p2 ? ""
                : " [n=2 pin is inconsistent with the closed form "
                  "(1+1/sqrt(3))(1+(sqrt(2)-1)/(sqrt(2)+1)) = 1.847981, which the n=1 and n=3 "
                  "pins confirm]"));
}

void criterion_13() {
  const SteeringWitness w = mub_witness(3);
  bool region_found = false;
  double region_lo = 0.0, region_hi = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double k = i / 100.0;
    const auto r = certification_report(qutrit_signalling_assemblage(1.0, k), w,
                                        AdjustMode::Tight, {});
    const bool in_region = r.certified_sn.value_or(0) == 3 && !r.adjusted_certified_sn;
    if (in_region) {
      if (!region_found) region_lo = k;
      region_hi = k;
      region_found = true;
    }
  }
  double coincide_dev = 0.0;
  {
    const Assemblage a0 = qutrit_signalling_assemblage(1.0, 0.0);
    const double gamma0 = gamma_from_assemblage(a0);
    for (int n = 1; n <= 3; ++n) {
      const double plain = schmidt_bound(3, n);
      coincide_dev = std::max(coincide_dev,
                              std::abs(adjusted_bound(plain, 2, gamma0, AdjustMode::Tight) -
                                       plain));
    }
  }
  const bool pass = region_found && coincide_dev <= 1e-9;
  report(13, pass,
         fmt("tight mode: SN-3-but-not-entanglement region k in [%.2f, %.2f] (%s); k=0 adjusted "
             "bounds coincide within %.1e (<=1e-9)",
             region_lo, region_hi, region_found ? "nonempty" : "empty", coincide_dev));
}

void criterion_14() {
  Timer timer;
  auto gen = testing::rng(1401);
  double max_pg = 0.0, min_pg = 1.0;
  bool in_range = true;
  for (int i = 0; i < 1000; ++i) {
    const auto r = guessing_probability({testing::random_state(2, gen),
                                         testing::random_state(2, gen),
                                         testing::random_state(2, gen)});
    max_pg = std::max(max_pg, r.pg);
    min_pg = std::min(min_pg, r.pg);
    if (r.pg < 1.0 / 3.0 - 1e-8 || r.pg > 1.0 + 1e-8) in_range = false;
  }
  const bool pass = in_range && max_pg <= 2.0 / 3.0 + 1e-6;
  report(14, pass,
         fmt("1000 qubit triples: Pg in [%.6f, %.6f], ceiling 2/3 %s, %.0fs", min_pg, max_pg,
             max_pg <= 2.0 / 3.0 + 1e-6 ? "respected" : "violated", timer.seconds()));
}

}  // namespace

int main() {
  Timer total;
  const slhv::StrategySet set = slhv::enumerate_strategies(Scenario::chsh());
  criterion_1(set);
  criterion_2(set);
  criterion_3(set);
  criterion_4();
  criterion_5(set);
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  std::printf("%d of 14 criteria failed, total %.0fs\n", failures, total.seconds());
  return failures;
}
