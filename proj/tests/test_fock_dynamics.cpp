#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/fock_dynamics.hpp"

using namespace isosqueeze;

TEST_CASE("beta ladder values and boundary") {
  const auto b5 = beta_ladder(5);
  REQUIRE(b5.beta.size() == 6);
  CHECK(b5.beta[1] == 48.0);
  CHECK(b5.beta[5] == 0.0);
  const auto b1 = beta_ladder(1);
  CHECK(b1.beta[0] == 2.0);
  CHECK(b1.beta[1] == 0.0);
  for (std::size_t N : {0u, 3u, 17u, 400u}) {
    const auto b = beta_ladder(N);
    CHECK(b.beta.back() == 0.0);
    for (double x : b.beta) CHECK(x >= 0.0);
  }
}

TEST_CASE("two-level system against its analytic solution") {
  const auto rk = integrate_subspace(1, 0.5);
  CHECK(rk.amps[0] == doctest::Approx(std::cos(std::sqrt(2.0) * 0.5)).epsilon(1e-10));
  CHECK(rk.amps[1] == doctest::Approx(std::sin(std::sqrt(2.0) * 0.5)).epsilon(1e-10));
  CHECK(rk.amps[0] == doctest::Approx(0.76024).epsilon(1e-5));
  CHECK(rk.amps[1] == doctest::Approx(0.64964).epsilon(1e-5));
  const auto ex = oracle_eigensolve(1, 0.5);
  CHECK(std::abs(ex.amps[0] - std::cos(std::sqrt(2.0) * 0.5)) <= 1e-12);
  CHECK(std::abs(ex.amps[1] - std::sin(std::sqrt(2.0) * 0.5)) <= 1e-12);
}

TEST_CASE("zero time is the vacuum for both routes") {
  for (std::size_t N : {1u, 10u, 333u}) {
    const auto a = integrate_subspace(N, 0.0);
    const auto b = oracle_eigensolve(N, 0.0);
    CHECK(a.amps[0] == 1.0);
    CHECK(b.amps[0] == 1.0);
    CHECK(subspace_norm(a) == 1.0);
    CHECK(state_distance(a, b) == 0.0);
    CHECK(a.amps.size() == N + 1);
  }
}

TEST_CASE("tau_for_squeezing") {
  CHECK(tau_for_squeezing(4000, 2.0) == doctest::Approx(0.0158114).epsilon(1e-6));
  CHECK(tau_for_squeezing(9000, 0.0) == 0.0);
  CHECK(tau_for_squeezing(1, 1.0) == 0.5);
  CHECK_THROWS_AS((void)tau_for_squeezing(0, 1.0), ParameterError);
}

TEST_CASE("property: RK4 agrees with the spectral oracle (N <= 500, r_N <= 2)") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pickN(1, 500);
  std::uniform_real_distribution<double> pickR(0.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t N = pickN(rng);
    const double tau = tau_for_squeezing(N, pickR(rng));
    const auto rk = integrate_subspace(N, tau);
    const auto ex = oracle_eigensolve(N, tau);
    INFO("N=" << N << " tau=" << tau);
    CHECK(state_distance(rk, ex) <= 1e-8);
    CHECK(std::abs(subspace_norm(ex) - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: unitarity for N <= 2000, r_N <= 2.5") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pickN(1, 2000);
  std::uniform_real_distribution<double> pickR(0.0, 2.5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t N = pickN(rng);
    const auto s = integrate_subspace(N, tau_for_squeezing(N, pickR(rng)));
    CHECK(std::abs(subspace_norm(s) - 1.0) <= 1e-9);
  }
}

TEST_CASE("property: integrating backwards returns to the vacuum") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pickN(1, 800);
  std::uniform_real_distribution<double> pickR(0.1, 2.0);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t N = pickN(rng);
    const double tau = tau_for_squeezing(N, pickR(rng));
    const auto fwd = integrate_subspace(N, tau);
    const auto back = propagate(fwd, -tau);
    CHECK(state_distance(back, SubspaceAmplitudes::vacuum(N)) <= 1e-7);
  }
}

TEST_CASE("step halving shows fourth-order convergence") {
  const std::size_t N = 50;
  const double tau = tau_for_squeezing(N, 1.0);
  const auto rep = step_halving_report(N, tau, 40);
  CHECK(rep.change_fine > 0.0);
  CHECK(rep.change_fine <= rep.change_coarse);
  const double ratio = rep.change_coarse / rep.change_fine;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("step count follows the spectral-radius rule") {
  IntegratorConfig cfg;
  cfg.step_mode = FixedCount{17};
  CHECK(step_count(10, 0.3, cfg) == 17);
  cfg.step_mode = SpectralSafety{1.0};
  const std::size_t full = step_count(100, 0.5, cfg);
  cfg.step_mode = SpectralSafety{0.5};
  const std::size_t half = step_count(100, 0.5, cfg);
  CHECK(full > kMinSpectralSteps);
  CHECK(half >= 2 * full - 1);
  CHECK(half <= 2 * full + 1);
  CHECK(step_count(100, 0.0, cfg) == 0);
  CHECK(step_count(1, 1e-3, cfg) == kMinSpectralSteps);
}

TEST_CASE("guards: coarse steps drift, tight caps overflow, bad configs are rejected") {
  IntegratorConfig coarse;
  coarse.step_mode = FixedCount{1};
  CHECK_THROWS_AS((void)integrate_subspace(200, tau_for_squeezing(200, 2.0), coarse), NormDriftExceeded);

  IntegratorConfig capped;
  capped.truncation = PairTruncation{5, 1e-12};
  CHECK_THROWS_AS((void)integrate_subspace(1000, tau_for_squeezing(1000, 2.0), capped), TruncationTailExceeded);

  IntegratorConfig bad;
  bad.step_mode = SpectralSafety{1.5};
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad.step_mode = SpectralSafety{0.25};
  bad.truncation = PairTruncation{10, 1.0};
  CHECK_THROWS_AS(bad.validate(), ParameterError);

  CHECK_THROWS_AS((void)oracle_eigensolve(kOracleDimensionCap + 1, 0.1), DimensionCapExceeded);
}

TEST_CASE("a suggested pair cap reproduces the full integration") {
  const std::size_t N = 3000;
  const double r = 1.5;
  const std::size_t cap = suggested_pair_cap(N, r);
  CHECK(cap < N);
  IntegratorConfig cfg;
  cfg.truncation = PairTruncation{cap};
  const auto capped = integrate_subspace(N, tau_for_squeezing(N, r), cfg);
  const auto full = integrate_subspace(N, tau_for_squeezing(N, r));
  CHECK(state_distance(capped, full) <= 1e-9);
  CHECK(suggested_pair_cap(10, 3.0) <= 10);
}

TEST_CASE("state_distance is symmetric, zero on identical input, and checks N") {
  const auto a = integrate_subspace(40, 0.05);
  const auto b = oracle_eigensolve(40, 0.07);
  CHECK(state_distance(a, a) == 0.0);
  CHECK(state_distance(a, b) == state_distance(b, a));
  CHECK(state_distance(a, b) > 0.0);
  CHECK_THROWS_AS((void)state_distance(a, SubspaceAmplitudes::vacuum(41)), MismatchedSubspace);
}
