#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sigbell/discrimination.hpp"
#include "sigbell/qlinalg.hpp"
#include "sigbell/slhs.hpp"
#include "sigbell/witness.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sigbell;

namespace {

Assemblage isotropic_pauli_assemblage(double v) {
  return assemblage_from(isotropic_state(2, v), pauli_measurements());
}

Assemblage product_assemblage(int m_a, int n_a, int dim, std::uint64_t seed) {
  auto gen = testing::rng(seed);
  Assemblage out;
  out.mA = m_a;
  out.nA = n_a;
  out.dim = dim;
  const Matrix rho = testing::random_state(dim, gen);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int x = 0; x < m_a; ++x) {
    std::vector<double> weights(n_a);
    double total = 0.0;
    for (auto& w : weights) total += (w = unit(gen));
    for (int a = 0; a < n_a; ++a) out.sigma.push_back(weights[a] / total * rho);
  }
  return out;
}

}  // namespace

TEST_CASE("guessing probability closed cases") {
  SUBCASE("identical states carry no information") {
    const Matrix rho = identity(2) / 2.0;
    const auto r = guessing_probability({rho, rho, rho});
    CHECK(r.pg == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(r.gap < 1e-6);
  }
  SUBCASE("orthogonal states are perfectly distinguishable") {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    const auto r = guessing_probability({p0, p1});
    CHECK(r.pg == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("povm and dual certificates") {
    auto gen = testing::rng(101);
    const std::vector<Matrix> states = {testing::random_state(3, gen),
                                        testing::random_state(3, gen),
                                        testing::random_state(3, gen)};
    const auto r = guessing_probability(states);
    Matrix sum = Matrix::Zero(3, 3);
    for (const auto& n : r.povm) {
      CHECK(min_eigenvalue(n) > -1e-7);
      sum += n;
    }
    CHECK((sum - identity(3)).cwiseAbs().maxCoeff() < 1e-8);
    for (const auto& s : states)
      CHECK(min_eigenvalue(r.dual_z - s / 3.0) > -1e-7);
  }
}

TEST_CASE("helstrom closed form and SDP agreement") {
  SUBCASE("reference points") {
    const Matrix rho = identity(2) / 2.0;
    CHECK(helstrom(rho, rho) == doctest::Approx(0.5));
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CHECK(helstrom(p0, p1) == doctest::Approx(1.0));
  }
  SUBCASE("qutrit reduced-state pair") {
    for (double k : {0.0, 0.25, 0.3, 0.5, 1.0}) {
      const Assemblage a = qutrit_signalling_assemblage(0.7, k);
      CHECK(helstrom(a.reduced_state(0), a.reduced_state(1)) ==
            doctest::Approx((1.0 + k) / 2.0).epsilon(1e-9));
    }
  }
  SUBCASE("agreement on random pairs") {
    auto gen = testing::rng(103);
    for (int i = 0; i < 20; ++i) {
      const int dim = i % 2 == 0 ? 2 : 3;
      const Matrix r1 = testing::random_state(dim, gen);
      const Matrix r2 = testing::random_state(dim, gen);
      CHECK(guessing_probability({r1, r2}).pg ==
            doctest::Approx(helstrom(r1, r2)).epsilon(1e-6));
    }
  }
}

TEST_CASE("guessing probability bounds and invariance") {
  auto gen = testing::rng(107);
  SUBCASE("qubit triples stay below 2/3") {
    for (int i = 0; i < 100; ++i) {
      const auto r = guessing_probability({testing::random_state(2, gen),
                                           testing::random_state(2, gen),
                                           testing::random_state(2, gen)});
      CHECK(r.pg >= 1.0 / 3.0 - 1e-8);
      CHECK(r.pg <= 2.0 / 3.0 + 1e-6);
    }
  }
  SUBCASE("unitary invariance") {
    for (int i = 0; i < 5; ++i) {
      const Matrix r1 = testing::random_state(3, gen);
      const Matrix r2 = testing::random_state(3, gen);
      const Matrix r3 = testing::random_state(3, gen);
      const auto before = guessing_probability({r1, r2, r3}).pg;
      const auto basis = testing::random_projective(3, gen);
      Matrix u = Matrix::Zero(3, 3);  // build a unitary from the projectors' eigenvectors
      for (int k = 0; k < 3; ++k) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(basis[k]);
        u.col(k) = es.eigenvectors().col(2);
      }
      Eigen::HouseholderQR<Matrix> qr(u);
      u = qr.householderQ();
      const auto after = guessing_probability(
          {u * r1 * u.adjoint(), u * r2 * u.adjoint(), u * r3 * u.adjoint()}).pg;
      CHECK(after == doctest::Approx(before).epsilon(1e-7));
    }
  }
  SUBCASE("pg above 1/m separates unequal reduced states") {
    const Assemblage a = qutrit_signalling_assemblage(0.5, 0.4);
    CHECK(gamma_from_assemblage(a) > 0.5 + 1e-3);
  }
}

TEST_CASE("gamma from assemblages") {
  SUBCASE("no-signalling assemblages sit at 1/mA") {
    CHECK(gamma_from_assemblage(qutrit_signalling_assemblage(0.9, 0.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gamma_from_assemblage(isotropic_pauli_assemblage(0.8)) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  }
  SUBCASE("orthogonal reduced states are fully distinguishable") {
    Assemblage a;
    a.mA = 2;
    a.nA = 2;
    a.dim = 2;
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    a.sigma = {0.5 * p0, 0.5 * p0, 0.5 * p1, 0.5 * p1};
    CHECK(gamma_from_assemblage(a) == doctest::Approx(1.0));
  }
}

TEST_CASE("response function enumeration") {
  CHECK(slhs::enumerate_response_functions(3, 2).size() == 8);
  CHECK(slhs::enumerate_response_functions(2, 3).size() == 9);
  CHECK(slhs::enumerate_response_functions(1, 7).size() == 7);
  const auto fs = slhs::enumerate_response_functions(2, 2);
  CHECK(fs[1][0] == 1);  // setting 0 varies fastest
  CHECK(fs[1][1] == 0);
  CHECK_THROWS_AS(slhs::enumerate_response_functions(20, 3), TooLarge);
}

TEST_CASE("slhs membership") {
  SUBCASE("gamma = 1 admits every assemblage") {
    const auto cert = slhs::slhs_membership(qutrit_signalling_assemblage(0.9, 0.6), 1.0);
    CHECK(cert.feasible);
    CHECK(cert.gamma_min <= 1.0 + 1e-7);
  }

  SUBCASE("weakly entangled isotropic states admit a no-signalling model") {
    const auto cert = slhs::slhs_membership(isotropic_pauli_assemblage(0.4), 1.0 / 3.0);
    CHECK(cert.feasible);
    CHECK(cert.gamma_min == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  }

  SUBCASE("the maximally entangled state is rejected at the no-signalling level") {
    const auto cert = slhs::slhs_membership(isotropic_pauli_assemblage(1.0), 1.0 / 3.0);
    CHECK_FALSE(cert.feasible);
    CHECK(cert.witness_margin > 1e-6);
    REQUIRE(cert.witness.size() == 6);

    // The functional evaluates to gamma_min on the tested assemblage and
    // stays at or below gamma on members.
    const Assemblage tested = isotropic_pauli_assemblage(1.0);
    double on_tested = 0.0;
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a)
        on_tested += (cert.witness[x * 2 + a] * tested.at(a, x)).trace().real();
    CHECK(std::abs(on_tested - cert.gamma_min) < 5e-4);  // certified sandwich width
    CHECK(on_tested > 1.0 / 3.0 + 1e-3);

    auto gen = testing::rng(113);
    for (int trial = 0; trial < 20; ++trial) {
      // LHS members constructed from explicit response functions.
      const auto responses = slhs::enumerate_response_functions(3, 2);
      std::vector<Matrix> hidden;
      double total = 0.0;
      std::uniform_real_distribution<double> unit(0.1, 1.0);
      std::vector<double> w(responses.size());
      for (auto& wi : w) total += (wi = unit(gen));
      Assemblage member;
      member.mA = 3;
      member.nA = 2;
      member.dim = 2;
      member.sigma.assign(6, Matrix::Zero(2, 2));
      for (std::size_t l = 0; l < responses.size(); ++l) {
        const Matrix state = testing::random_state(2, gen) * (w[l] / total);
        for (int x = 0; x < 3; ++x) member.at(responses[l][x], x) += state;
      }
      double on_member = 0.0;
      for (int x = 0; x < 3; ++x)
        for (int a = 0; a < 2; ++a)
          on_member += (cert.witness[x * 2 + a] * member.at(a, x)).trace().real();
      CHECK(on_member <= 1.0 / 3.0 + 1e-6);
    }
  }

  SUBCASE("feasible certificates satisfy the model equations") {
    const Assemblage a = qutrit_signalling_assemblage(0.5, 0.5);
    const double gamma = gamma_from_assemblage(a);
    const auto cert = slhs::slhs_membership(a, gamma);
    CHECK(cert.feasible);
    const auto responses = slhs::enumerate_response_functions(2, 3);
    for (int x = 0; x < 2; ++x)
      for (int o = 0; o < 3; ++o) {
        Matrix sum = Matrix::Zero(3, 3);
        for (std::size_t l = 0; l < responses.size(); ++l)
          if (responses[l][x] == o) sum += cert.hidden[l * 2 + x];
        CHECK((sum - a.at(o, x)).cwiseAbs().maxCoeff() < 1e-7);
      }
    double z_total = 0.0;
    for (std::size_t l = 0; l < responses.size(); ++l) {
      z_total += cert.z_ops[l].real().trace();
      for (int x = 0; x < 2; ++x) {
        CHECK(min_eigenvalue(cert.z_ops[l] - cert.hidden[l * 2 + x] / 2.0) > -1e-8);
        CHECK(cert.hidden[l * 2 + x].real().trace() ==
              doctest::Approx(cert.p_lambda[l]).epsilon(1e-7));
      }
    }
    CHECK(z_total <= gamma + 1e-7);

    // Decomposition recovery: sigma = (1+t) sigma_LHS - t tau with
    // t = mA * sum tr(Z) - 1 and tau a valid signalling assemblage.
    const double t = 2.0 * z_total - 1.0;
    if (t > 1e-7) {
      double tau_trace = 0.0;
      for (int x = 0; x < 2; ++x) {
        Matrix tau_sum = Matrix::Zero(3, 3);
        for (int o = 0; o < 3; ++o) {
          Matrix lhs_part = Matrix::Zero(3, 3);
          for (std::size_t l = 0; l < responses.size(); ++l)
            if (responses[l][x] == o) lhs_part += 2.0 * cert.z_ops[l];
          const Matrix tau = (lhs_part - a.at(o, x)) / t;
          CHECK(min_eigenvalue(tau) > -1e-7);
          tau_sum += tau;
        }
        if (x == 0) tau_trace = tau_sum.real().trace();
        CHECK(tau_sum.real().trace() == doctest::Approx(tau_trace).epsilon(1e-6));
      }
      CHECK(tau_trace == doctest::Approx(1.0).epsilon(1e-5));
    }
  }

  SUBCASE("gamma outside range is rejected") {
    CHECK_THROWS_AS(slhs::slhs_membership(isotropic_pauli_assemblage(0.5), 0.1), InvalidGamma);
    CHECK_THROWS_AS(slhs::slhs_membership(isotropic_pauli_assemblage(0.5), 1.5), InvalidGamma);
  }
}

TEST_CASE("slhs robustness") {
  SUBCASE("members have zero robustness") {
    const auto r = slhs::slhs_robustness(isotropic_pauli_assemblage(0.4), 1.0 / 3.0);
    CHECK(r.value <= 1e-7);
  }

  SUBCASE("the maximally entangled state is robustly outside") {
    const auto r = slhs::slhs_robustness(isotropic_pauli_assemblage(1.0), 1.0 / 3.0);
    CHECK(r.value > 1e-3);
    REQUIRE(r.noise.has_value());
    r.noise->validate(1e-5);

    // Mixing back with the reported noise lands inside the set.
    Assemblage mixed = isotropic_pauli_assemblage(1.0);
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a)
        mixed.at(a, x) =
            (mixed.at(a, x) + r.value * r.noise->at(a, x)) / (1.0 + r.value);
    const auto cert = slhs::slhs_membership(mixed, 1.0 / 3.0);
    CHECK(cert.gamma_min <= 1.0 / 3.0 + 1e-5);
  }

  SUBCASE("robustness does not increase with gamma") {
    const Assemblage a = isotropic_pauli_assemblage(1.0);
    const double r1 = slhs::slhs_robustness(a, 1.0 / 3.0).value;
    const double r2 = slhs::slhs_robustness(a, 0.4).value;
    CHECK(r2 <= r1 + 1e-7);
  }

  SUBCASE("mixing towards a member does not increase robustness") {
    const Assemblage steerable = isotropic_pauli_assemblage(1.0);
    const Assemblage member = isotropic_pauli_assemblage(0.3);
    const double base = slhs::slhs_robustness(steerable, 1.0 / 3.0).value;
    for (double w : {0.3, 0.7}) {
      Assemblage mixed = steerable;
      for (int x = 0; x < 3; ++x)
        for (int a = 0; a < 2; ++a)
          mixed.at(a, x) = (1.0 - w) * steerable.at(a, x) + w * member.at(a, x);
      CHECK(slhs::slhs_robustness(mixed, 1.0 / 3.0).value <= base + 1e-7);
    }
  }
}

TEST_CASE("white noise robustness") {
  SUBCASE("members need no noise") {
    const auto r = slhs::slhs_white_noise_robustness(isotropic_pauli_assemblage(0.4), 1.0 / 3.0);
    CHECK(r.value <= 1e-7);
    CHECK(r.white_noise);
  }
  SUBCASE("larger gamma needs no more noise") {
    const Assemblage a = isotropic_pauli_assemblage(1.0);
    const double e1 = slhs::slhs_white_noise_robustness(a, 1.0 / 3.0).value;
    const double e2 = slhs::slhs_white_noise_robustness(a, 0.4).value;
    CHECK(e1 > 1e-3);
    CHECK(e2 <= e1 + 1e-7);
  }
  SUBCASE("closed form along the isotropic family") {
    // White noise moves along the family, so at the no-signalling level the
    // required mixing is exactly v*sqrt(3) - 1.
    for (double v : {0.7, 0.85, 1.0}) {
      const double eps = slhs::slhs_white_noise_robustness(isotropic_pauli_assemblage(v),
                                                           1.0 / 3.0).value;
      CHECK(eps == doctest::Approx(std::max(0.0, v * std::sqrt(3.0) - 1.0)).epsilon(2e-5));
    }
  }
  SUBCASE("robustness-membership consistency across visibilities") {
    for (double v : {0.2, 0.5, 0.7, 1.0}) {
      const Assemblage a = isotropic_pauli_assemblage(v);
      const bool member = slhs::slhs_membership(a, 1.0 / 3.0).feasible;
      const double sr = slhs::slhs_robustness(a, 1.0 / 3.0).value;
      CHECK(member == (sr <= 1e-6));
    }
  }
}

TEST_CASE("gamma recovery against the no-signalling oracle") {
  auto gen = testing::rng(127);
  for (int trial = 0; trial < 6; ++trial) {
    // Random two-qubit states measured with three projective bases give
    // no-signalling assemblages of varying steerability.
    const Matrix rho = trial % 2 == 0
                           ? isotropic_state(2, 0.3 + 0.1 * trial)
                           : testing::random_state(4, gen);
    MeasurementFamily meas;
    for (int x = 0; x < 3; ++x) meas.push_back(testing::random_projective(2, gen));
    const Assemblage a = assemblage_from(rho, meas);
    const bool oracle = testing::lhs_member(a);
    const bool mine = slhs::slhs_membership(a, 1.0 / 3.0).feasible;
    CHECK(mine == oracle);
  }
}

TEST_CASE("table pipeline") {
  SUBCASE("no-signalling unsteerable data reports the clean triple") {
    const auto r = slhs::table1_pipeline(isotropic_pauli_assemblage(0.3));
    CHECK(r.pg == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r.sr <= 1e-6);
    CHECK(r.sr_whitenoise <= 1e-6);
  }
  SUBCASE("identical reduced states in the qutrit model") {
    const auto r = slhs::table1_pipeline(qutrit_signalling_assemblage(1.0, 0.0));
    CHECK(r.pg == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("conjugated reduced states produce signalling and robustness") {
    const Assemblage a = qutrit_signalling_assemblage(1.0, 0.5);
    const auto r = slhs::table1_pipeline(a);
    CHECK(r.pg == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(r.sr >= 0.0);
  }
  SUBCASE("conjugated maximally entangled assemblage signals and stays steerable") {
    // Setting-dependent conjugation of the three-Pauli assemblage.
    Assemblage a = isotropic_pauli_assemblage(1.0);
    for (int x = 0; x < 3; ++x) {
      Matrix tau = identity(2);
      tau(x % 2, x % 2) += 0.25 * (x + 1) / 3.0;
      const Matrix root = sqrt_psd(tau);
      double norm = 0.0;
      std::vector<Matrix> blocks(2);
      for (int o = 0; o < 2; ++o) {
        blocks[o] = root * a.at(o, x) * root;
        norm += blocks[o].real().trace();
      }
      for (int o = 0; o < 2; ++o) a.at(o, x) = blocks[o] / norm;
    }
    a.validate();
    const auto r = slhs::table1_pipeline(a);
    CHECK(r.pg > 1.0 / 3.0 + 1e-4);
    CHECK(r.sr > 1e-4);
  }
}

TEST_CASE("schmidt bounds") {
  CHECK(schmidt_bound(3, 1) == doctest::Approx(1.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-12));
  const double expected_n2 =
      (1.0 + 1.0 / std::sqrt(3.0)) * (1.0 + (std::numbers::sqrt2 - 1.0) / (std::numbers::sqrt2 + 1.0));
  CHECK(schmidt_bound(3, 2) == doctest::Approx(expected_n2).epsilon(1e-12));
  CHECK(schmidt_bound(3, 3) == doctest::Approx(2.0).epsilon(1e-12));
  for (int d : {2, 3, 4})
    for (int n = 2; n <= d; ++n) CHECK(schmidt_bound(d, n) > schmidt_bound(d, n - 1));
  CHECK_THROWS_AS(schmidt_bound(3, 4), InvalidArgs);
  CHECK_THROWS_AS(schmidt_bound(3, 0), InvalidArgs);
}

TEST_CASE("adjusted bounds") {
  SUBCASE("tight mode recovers the bound at the no-signalling point") {
    CHECK(adjusted_bound(1.7, 3, 1.0 / 3.0, AdjustMode::Tight) == doctest::Approx(1.7));
    CHECK(adjusted_bound(1.7, 2, 0.5, AdjustMode::Tight) == doctest::Approx(1.7));
  }
  SUBCASE("paper mode applies the linear factor directly") {
    CHECK(adjusted_bound(1.0, 3, 1.0 / 3.0, AdjustMode::Paper) == doctest::Approx(2.0));
  }
  SUBCASE("qutrit-model reference value") {
    CHECK(adjusted_bound(1.5774, 2, (1.0 + 0.4) / 2.0, AdjustMode::Tight) ==
          doctest::Approx(1.5774 * 1.4).epsilon(1e-12));
  }
  SUBCASE("monotonicity and ordering of the modes") {
    for (double gamma : {0.34, 0.5, 0.8, 1.0}) {
      CHECK(adjusted_bound(1.0, 3, gamma, AdjustMode::Tight) <=
            adjusted_bound(1.0, 3, gamma, AdjustMode::Paper) + 1e-12);
    }
    double prev = 0.0;
    for (double gamma : {0.5, 0.6, 0.7, 0.9}) {
      const double b = adjusted_bound(1.0, 2, gamma, AdjustMode::Tight);
      CHECK(b >= prev);
      prev = b;
    }
  }
  CHECK_THROWS_AS(adjusted_bound(1.0, 2, 0.2, AdjustMode::Tight), InvalidGamma);
}

TEST_CASE("mub witness") {
  const SteeringWitness w = mub_witness(3);
  w.validate();

  SUBCASE("each setting's operators resolve the identity") {
    for (int x = 0; x < 2; ++x) {
      Matrix sum = Matrix::Zero(3, 3);
      for (int a = 0; a < 3; ++a) sum += w.at(a, x);
      CHECK((sum - identity(3)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("the ideal qutrit model saturates the top bound") {
    CHECK(evaluate_witness(qutrit_signalling_assemblage(1.0, 0.0), w) ==
          doctest::Approx(2.0).epsilon(1e-10));
  }

  SUBCASE("unsteerable assemblages respect the LHS bound") {
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      CHECK(evaluate_witness(product_assemblage(2, 3, 3, seed), w) <=
            schmidt_bound(3, 1) + 1e-7);
    auto gen = testing::rng(131);
    const auto responses = slhs::enumerate_response_functions(2, 3);
    for (int trial = 0; trial < 5; ++trial) {
      Assemblage member;
      member.mA = 2;
      member.nA = 3;
      member.dim = 3;
      member.sigma.assign(6, Matrix::Zero(3, 3));
      std::uniform_real_distribution<double> unit(0.1, 1.0);
      std::vector<double> weights(responses.size());
      double total = 0.0;
      for (auto& wi : weights) total += (wi = unit(gen));
      for (std::size_t l = 0; l < responses.size(); ++l) {
        const Matrix state = testing::random_state(3, gen) * (weights[l] / total);
        for (int x = 0; x < 2; ++x) member.at(responses[l][x], x) += state;
      }
      CHECK(evaluate_witness(member, w) <= schmidt_bound(3, 1) + 1e-6);
    }
  }

  SUBCASE("witness value scales linearly") {
    const Assemblage a = qutrit_signalling_assemblage(0.8, 0.2);
    const double value = evaluate_witness(a, w);
    Assemblage scaled = a;
    for (auto& op : scaled.sigma) op *= 0.5;
    CHECK(evaluate_witness(scaled, w) == doctest::Approx(0.5 * value).epsilon(1e-12));
  }
}

TEST_CASE("certification report on the qutrit family") {
  const SteeringWitness w = mub_witness(3);

  SUBCASE("ideal model certifies full Schmidt number") {
    const auto r = certification_report(qutrit_signalling_assemblage(1.0, 0.0), w);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(r.certified_sn.has_value());
    CHECK(*r.certified_sn == 3);
    REQUIRE(r.adjusted_certified_sn.has_value());
    CHECK(*r.adjusted_certified_sn == 3);  // tight adjustment is inert at k = 0
  }

  SUBCASE("intermediate signalling keeps the claim but loses the adjusted one") {
    const auto r = certification_report(qutrit_signalling_assemblage(1.0, 0.3), w);
    REQUIRE(r.certified_sn.has_value());
    CHECK(*r.certified_sn == 3);
    CHECK_FALSE(r.adjusted_certified_sn.has_value());
  }

  SUBCASE("paper mode is stricter than tight mode") {
    const auto tight = certification_report(qutrit_signalling_assemblage(1.0, 0.1), w,
                                            AdjustMode::Tight);
    const auto paper = certification_report(qutrit_signalling_assemblage(1.0, 0.1), w,
                                            AdjustMode::Paper);
    CHECK(paper.adjusted_certified_sn.value_or(0) <= tight.adjusted_certified_sn.value_or(0));
  }
}
