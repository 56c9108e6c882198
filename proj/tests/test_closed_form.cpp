#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isosqueeze/closed_form.hpp"
#include "isosqueeze/errors.hpp"

using namespace isosqueeze;

namespace {

// sqrt(sech r) sqrt(C(2n,n)) (tanh r / 2)^n by plain products.
double naive_squeezed(std::size_t n, double r) {
  double v = std::sqrt(1.0 / std::cosh(r));
  const double t = std::tanh(r) / 2.0;
  for (std::size_t k = 1; k <= n; ++k) {
    // C(2k,k)/C(2k-2,k-1) = (2k)(2k-1)/k^2
    v *= std::sqrt(2.0 * k * (2.0 * k - 1.0) / (double(k) * double(k))) * t;
  }
  return v;
}

}  // namespace

TEST_CASE("squeezed amplitude examples") {
  CHECK(squeezed_amplitude(0, 1.0).value() == doctest::Approx(0.805019).epsilon(1e-6));
  CHECK(squeezed_amplitude(0, 0.0).value() == 1.0);
  CHECK(squeezed_amplitude(3, 0.0).value() == 0.0);
  CHECK(squeezed_amplitude(3, 0.0).sign == 0);
  CHECK_THROWS_AS((void)squeezed_amplitude(1, -0.1), ParameterError);
}

TEST_CASE("squeezed state is normalized") {
  CompensatedSum s;
  for (std::size_t n = 0;; ++n) {
    const double a = squeezed_amplitude(n, 1.5).value();
    s.add(a * a);
    if (a * a < 1e-18) break;
  }
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("property: log-domain amplitudes equal naive products (n <= 50, r <= 3)") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pickN(0, 50);
  std::uniform_real_distribution<double> pickR(0.01, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = pickN(rng);
    const double r = pickR(rng);
    CHECK(squeezed_amplitude(n, r).value() == doctest::Approx(naive_squeezed(n, r)).epsilon(1e-12));
  }
}

TEST_CASE("isoenergetic family") {
  const auto vac = isoenergetic_amplitudes(50, 0.0);
  CHECK(vac.amps[0] == 1.0);
  CHECK(subspace_norm(vac) == 1.0);
  CHECK(vac.kind == AmplitudeKind::Isoenergetic);
  CHECK_THROWS_AS((void)isoenergetic_amplitudes(0, 0.1), ParameterError);

  const std::size_t N = 400;
  const double r = 1.2;
  const auto iso = isoenergetic_amplitudes(N, tau_for_squeezing(N, r));
  for (std::size_t n : {0u, 1u, 7u, 30u}) {
    CHECK(iso.amps[n] == doctest::Approx(squeezed_amplitude(n, r).value()).epsilon(1e-13));
  }
  CHECK(subspace_norm(iso) <= 1.0 + 1e-15);
}

TEST_CASE("parametric projection family") {
  for (double r : {0.3, 1.0, 2.5}) {
    const auto p = parametric_projection_amplitudes(500, 7.0, r);
    CHECK(p.amps[0] == doctest::Approx(std::sqrt(1.0 / std::cosh(r))));
  }
  // At N = alpha^2 the n = 0 entries of both families coincide.
  const std::size_t N = 10000;
  const double alpha = 100.0;
  const double r = 1.0;
  const auto par = parametric_projection_amplitudes(N, alpha, r);
  const auto iso = isoenergetic_amplitudes(N, tau_for_squeezing(N, r));
  CHECK(par.amps[0] == doctest::Approx(iso.amps[0]).epsilon(1e-15));
  for (std::size_t n = 1; n <= 5; ++n) {
    const double ratio = par.amps[n] / iso.amps[n];
    CHECK(std::abs(ratio - 1.0) <= 2.0 * double(n * n) / alpha);
    CHECK(ratio < 1.0);
  }
  CHECK_THROWS_AS((void)parametric_projection_amplitudes(10, 0.0, 1.0), ParameterError);

  // Probability weighting applies the depletion factor twice.
  const auto amp = parametric_projection_amplitudes(100, 10.0, 1.0, DepletionWeight::Amplitude);
  const auto prob = parametric_projection_amplitudes(100, 10.0, 1.0, DepletionWeight::Probability);
  const double base = squeezed_amplitude(4, 1.0).value();
  CHECK(prob.amps[4] / base == doctest::Approx(std::pow(amp.amps[4] / base, 2)).epsilon(1e-12));
}

TEST_CASE("ApproximationFamily dispatches to the right formula") {
  ApproximationFamily f{FamilyKind::Isoenergetic, 300, 0.0, 1.1};
  CHECK(state_distance(f.amplitudes(), isoenergetic_amplitudes(300, tau_for_squeezing(300, 1.1))) == 0.0);
  f = {FamilyKind::ParametricProjection, 300, 17.0, 1.1};
  CHECK(state_distance(f.amplitudes(), parametric_projection_amplitudes(300, 17.0, 1.1)) == 0.0);
  f = {FamilyKind::GaussianSqueezed, 300, 0.0, 1.1};
  CHECK(f.amplitudes().amps[3] == doctest::Approx(squeezed_amplitude(3, 1.1).value()));
}

TEST_CASE("projection cutoff") {
  CHECK(projection_cutoff(4000, 0.01) == 6);
  CHECK(projection_cutoff(9000, 0.01) == 9);
  CHECK(projection_cutoff(100, 0.01) == 1);
  CHECK(projection_cutoff(10000, 0.01) == 10);
  CHECK_THROWS_AS((void)projection_cutoff(50, 0.01), AsymptoticRegimeViolation);
  CHECK_THROWS_AS((void)projection_cutoff(50, 1.5), ParameterError);
}

TEST_CASE("tail deficit: closed form basics") {
  CHECK(tail_norm_deficit_closed(0.0, 10) == 0.0);
  CHECK(tail_norm_deficit_closed(1e-6, 10) < 1e-100);
  CHECK_THROWS_AS((void)tail_norm_deficit_closed(1.0, 0), ParameterError);
  const double r = 1.3;
  const std::size_t n = 40;
  CHECK(tail_norm_deficit_closed(r, n) ==
        doctest::Approx(std::cosh(r) * std::pow(std::tanh(r), 2.0 * n) / std::sqrt(std::numbers::pi * n)));
}

TEST_CASE("tail deficit: direct sum equals the head complement") {
  CHECK(tail_norm_deficit_direct(0.0, 5) == 0.0);
  for (double r : {0.5, 1.0, 2.0}) {
    for (std::size_t n_N : {1u, 10u, 30u}) {
      CompensatedSum head;
      for (std::size_t n = 0; n <= n_N; ++n) head.add(std::pow(squeezed_amplitude(n, r).value(), 2));
      const double direct = tail_norm_deficit_direct(r, n_N);
      CHECK(direct > 0.0);
      CHECK(direct < 1.0);
      CHECK(1.0 - head.value() == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("tail deficit: log form survives below double range") {
  const double l = log_tail_norm_deficit_direct(0.5, 1000);
  CHECK(std::isfinite(l));
  CHECK(l < -1000.0);
  CHECK(tail_norm_deficit_direct(0.5, 1000) == 0.0);
  CHECK(std::isfinite(log_tail_norm_deficit_direct(12.0, 20)));
}

TEST_CASE("property: closed tail tracks the direct sum from n_N with O(sinh^2 r / n_N) error") {
  for (std::size_t n_N : {50u, 200u, 1000u}) {
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
      const double rel = std::expm1(log_tail_norm_deficit_direct(r, n_N, TailStart::AtCutoff) -
                                    log_tail_norm_deficit_closed(r, n_N));
      const double s = std::sinh(r);
      INFO("n_N=" << n_N << " r=" << r << " rel=" << rel);
      CHECK(std::abs(rel) <= (1.0 + s * s) / double(n_N));
    }
  }
}

TEST_CASE("Stirling-type bound for the central binomial, monotone in n") {
  double prev = 0.0;
  for (std::size_t n = 1; n <= 10000; ++n) {
    const double x = std::exp(log_central_binomial(n) + 0.5 * std::log(std::numbers::pi * n) - n * std::log(4.0));
    CHECK(x <= 1.0 + 1e-12);
    CHECK(x >= 1.0 / (1.0 + 1.0 / (3.0 * n)) - 1e-12);
    CHECK(x >= prev - 1e-14);
    prev = x;
  }
}

TEST_CASE("parametric norm: exact sum") {
  CHECK(parametric_norm_exact(1000, 31.6, 0.0) == 1.0);
  const std::size_t N = 4000;
  const double alpha = std::sqrt(4000.0);
  const double norm = subspace_norm(parametric_projection_amplitudes(N, alpha, 2.0));
  CHECK(parametric_norm_exact(N, alpha, 2.0) == doctest::Approx(norm * norm).epsilon(1e-12));
}

TEST_CASE("parametric norm: first order") {
  CHECK(parametric_norm_first_order(10000, 100.0, 1.3) == 1.0);
  CHECK(parametric_norm_first_order(10100, 100.0, 1.0) > 1.0);
  CHECK(parametric_norm_first_order(9900, 100.0, 1.0) < 1.0);
  CHECK(parametric_norm_first_order(10100, 100.0, 1.0) == doctest::Approx(1.00690).epsilon(1e-5));
  for (std::size_t N : {9800u, 10000u, 10200u}) {
    CHECK(std::abs(parametric_norm_exact(N, 100.0, 1.0) - parametric_norm_first_order(N, 100.0, 1.0)) <= 1e-3);
  }
}

TEST_CASE("parametric norm: mean squared deviation") {
  CHECK(parametric_norm_msq_deviation(100.0, 0.0) == 0.0);
  CHECK(parametric_norm_msq_deviation(100.0, 1.0) == doctest::Approx(4.77e-5).epsilon(2e-3));
  for (double r : {1.0, 1.5}) {
    const double direct = parametric_norm_msq_deviation_direct(100.0, r);
    CHECK(direct == doctest::Approx(parametric_norm_msq_deviation(100.0, r)).epsilon(0.1));
  }
}
