#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "isosqueeze/log_math.hpp"
#include "isosqueeze/parallel.hpp"

using namespace isosqueeze;

TEST_CASE("log_cosh and log_sech match direct evaluation where representable") {
  for (double r : {0.0, 1e-8, 0.3, 1.0, 5.0, 20.0}) {
    CHECK(log_cosh(r) == doctest::Approx(std::log(std::cosh(r))).epsilon(1e-14));
    CHECK(log_sech(r) == doctest::Approx(-std::log(std::cosh(r))).epsilon(1e-14));
  }
  // cosh(800) overflows a double, its log does not.
  CHECK(log_cosh(800.0) == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("log_tanh keeps the digits that tanh rounds away") {
  CHECK(std::isinf(log_tanh(0.0)));
  CHECK(log_tanh(0.2) == doctest::Approx(std::log(std::tanh(0.2))).epsilon(1e-14));
  CHECK(log_tanh(2.0) == doctest::Approx(std::log(std::tanh(2.0))).epsilon(1e-13));
  // ln tanh r ~ -2 e^{-2r} for large r, where tanh(r) == 1.0 in double.
  const double r = 20.0;
  CHECK(std::tanh(r) == 1.0);
  CHECK(log_tanh(r) == doctest::Approx(-2.0 * std::exp(-2.0 * r)).epsilon(1e-12));
  CHECK(log_tanh_squared(r) == doctest::Approx(2.0 * log_tanh(r)));
}

TEST_CASE("sech_squared avoids cancellation") {
  CHECK(sech_squared(0.0) == doctest::Approx(1.0));
  CHECK(sech_squared(1.0) == doctest::Approx(1.0 / (std::cosh(1.0) * std::cosh(1.0))).epsilon(1e-14));
  CHECK(sech_squared(30.0) == doctest::Approx(4.0 * std::exp(-60.0)).epsilon(1e-12));
}

TEST_CASE("binomials and factorials against exact integers") {
  CHECK(std::exp(log_factorial(0)) == doctest::Approx(1.0));
  CHECK(std::exp(log_factorial(10)) == doctest::Approx(3628800.0).epsilon(1e-13));
  CHECK(std::exp(log_central_binomial(5)) == doctest::Approx(252.0).epsilon(1e-13));
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0).epsilon(1e-13));
  CHECK(std::exp(log_falling_factorial(7, 3)) == doctest::Approx(210.0).epsilon(1e-13));
  CHECK(log_falling_factorial(7, 0) == doctest::Approx(0.0));
}

TEST_CASE("property: Pascal's rule holds in log form") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(1, 5000);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t N = pick(rng) + 1;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, N - 1)(rng);
    const double lhs = log_binomial(N, n);
    const double a = log_binomial(N - 1, n - 1);
    const double b = log_binomial(N - 1, n);
    const std::vector<double> parts{a, b};
    CHECK(lhs == doctest::Approx(log_sum_exp(parts)).epsilon(1e-11));
  }
}

TEST_CASE("log_sum_exp is shift invariant and handles -inf") {
  const std::vector<double> xs{-1000.0, -1001.0, -1002.0};
  const std::vector<double> ys{0.0, -1.0, -2.0};
  CHECK(log_sum_exp(xs) == doctest::Approx(log_sum_exp(ys) - 1000.0).epsilon(1e-15));
  const std::vector<double> empty;
  CHECK(std::isinf(log_sum_exp(empty)));
  const std::vector<double> all_neg_inf{kNegInf, kNegInf};
  CHECK(std::isinf(log_sum_exp(all_neg_inf)));
}

TEST_CASE("CompensatedSum recovers small addends lost by naive summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-10).epsilon(1e-6));
}

TEST_CASE("LogAmplitude round trip") {
  CHECK(LogAmplitude::zero().value() == 0.0);
  CHECK(LogAmplitude::from_log(kNegInf).sign == 0);
  CHECK(LogAmplitude::from_log(std::log(0.25)).value() == doctest::Approx(0.25));
  CHECK(LogAmplitude{-1, std::log(2.0)}.value() == doctest::Approx(-2.0));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
