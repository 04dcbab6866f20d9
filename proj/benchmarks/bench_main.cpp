#include <benchmark/benchmark.h>

#include "sigbell/discrimination.hpp"
#include "sigbell/postselect.hpp"
#include "sigbell/qlinalg.hpp"
#include "sigbell/slhs.hpp"
#include "sigbell/slhv.hpp"

using namespace sigbell;

namespace {

void BM_EnumerateStrategiesChsh(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(slhv::enumerate_strategies(Scenario::chsh()));
}
BENCHMARK(BM_EnumerateStrategiesChsh);

void BM_VisibilityChshZeroBudget(benchmark::State& state) {
  const auto set = slhv::enumerate_strategies(Scenario::chsh());
  const Behavior b = standard_behavior(StandardBehavior::IdealQuantumChsh);
  const SignallingBudget zero = SignallingBudget::zero(Scenario::chsh());
  for (auto _ : state) benchmark::DoNotOptimize(slhv::visibility(set, b, zero, {}));
}
BENCHMARK(BM_VisibilityChshZeroBudget);

void BM_DualVisibilityDataBudget(benchmark::State& state) {
  const auto set = slhv::enumerate_strategies(Scenario::chsh());
  const auto ps = postselect::postselect_table(
      standard_behavior(StandardBehavior::IdealQuantumChsh),
      postselect::DetectorModel::outcome_only(1.0, 0.6));
  for (auto _ : state)
    benchmark::DoNotOptimize(slhv::dual_visibility(set, ps.behavior, ps.budgets, {}));
}
BENCHMARK(BM_DualVisibilityDataBudget);

void BM_GuessingQubitTriple(benchmark::State& state) {
  const auto paulis = pauli_measurements();
  const std::vector<Matrix> states = {0.5 * identity(2) + 0.3 * (paulis[0][0] - paulis[0][1]),
                                      0.5 * identity(2) + 0.2 * (paulis[1][0] - paulis[1][1]),
                                      0.5 * identity(2) + 0.1 * (paulis[2][0] - paulis[2][1])};
  for (auto _ : state) benchmark::DoNotOptimize(guessing_probability(states));
}
BENCHMARK(BM_GuessingQubitTriple);

void BM_WhiteNoiseRobustnessIsotropic(benchmark::State& state) {
  const Assemblage a = assemblage_from(isotropic_state(2, 0.9), pauli_measurements());
  for (auto _ : state)
    benchmark::DoNotOptimize(slhs::slhs_white_noise_robustness(a, 1.0 / 3.0));
}
BENCHMARK(BM_WhiteNoiseRobustnessIsotropic);

void BM_PostselectClosedForms(benchmark::State& state) {
  double eta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(postselect::chsh_postselected(1.0, eta));
    benchmark::DoNotOptimize(
        postselect::alpha_postselected(1.0, eta, postselect::Variant::Quantum));
    eta = 0.5 + 0.5 * (eta * 997.0 - std::floor(eta * 997.0));
  }
}
BENCHMARK(BM_PostselectClosedForms);

}  // namespace

BENCHMARK_MAIN();
