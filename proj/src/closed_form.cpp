#include "isosqueeze/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/parallel.hpp"
#include "isosqueeze/window.hpp"

namespace isosqueeze {

namespace {

void require_nonnegative_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("squeezing parameter must be finite and >= 0");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and > 0");
}

// ln c_n(r) with the n = 0 term kept exact when ln tanh r = -inf.
double log_skeleton(std::size_t n, double log_sech_r, double log_half_tanh) {
  if (n == 0) return 0.5 * log_sech_r;
  return 0.5 * log_sech_r + 0.5 * log_central_binomial(n) + static_cast<double>(n) * log_half_tanh;
}

// ln c_n(r)^2.
double log_skeleton_sq(std::size_t n, double log_sech_r, double log_half_tanh) {
  return 2.0 * log_skeleton(n, log_sech_r, log_half_tanh);
}

}  // namespace

LogAmplitude squeezed_amplitude(std::size_t n, double r) {
  require_nonnegative_r(r);
  const double l = log_skeleton(n, log_sech(r), log_tanh(r) - std::numbers::ln2);
  return LogAmplitude::from_log(l);
}

SubspaceAmplitudes isoenergetic_amplitudes(std::size_t N, double tau) {
  if (N == 0) throw ParameterError("isoenergetic amplitudes need N >= 1");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("tau must be finite and >= 0");
  const double r_N = 2.0 * std::sqrt(static_cast<double>(N)) * tau;
  SubspaceAmplitudes out{N, std::vector<double>(N + 1, 0.0), AmplitudeKind::Isoenergetic, tau};
  const double ls = log_sech(r_N);
  const double lh = log_tanh(r_N) - std::numbers::ln2;
  for (std::size_t n = 0; n <= N; ++n) {
    const double l = log_skeleton(n, ls, lh);
    // c_n is decreasing in n, so once it underflows the rest does too.
    if (l < -745.0) break;
    out.amps[n] = std::exp(l);
  }
  return out;
}

SubspaceAmplitudes parametric_projection_amplitudes(std::size_t N, double alpha, double r, DepletionWeight weight) {
  require_alpha(alpha);
  require_nonnegative_r(r);
  const double power = weight == DepletionWeight::Amplitude ? 0.5 : 1.0;
  SubspaceAmplitudes out{N, std::vector<double>(N + 1, 0.0), AmplitudeKind::Parametric, r / (2.0 * alpha)};
  const double ls = log_sech(r);
  const double lh = log_tanh(r) - std::numbers::ln2;
  const double la = std::log(alpha);
  for (std::size_t n = 0; n <= N; ++n) {
    if (n == 0) {
      out.amps[0] = std::exp(0.5 * ls);
      continue;
    }
    const double l = log_skeleton(n, ls, lh) + power * (log_falling_factorial(N, n) - 2.0 * static_cast<double>(n) * la);
    out.amps[n] = exp_or_zero(l);
  }
  return out;
}

SubspaceAmplitudes ApproximationFamily::amplitudes() const {
  switch (kind) {
    case FamilyKind::GaussianSqueezed: {
      require_nonnegative_r(r);
      SubspaceAmplitudes out{N, std::vector<double>(N + 1, 0.0), AmplitudeKind::Parametric, 0.0};
      for (std::size_t n = 0; n <= N; ++n) out.amps[n] = squeezed_amplitude(n, r).value();
      return out;
    }
    case FamilyKind::Isoenergetic:
      return isoenergetic_amplitudes(N, tau_for_squeezing(N, r));
    case FamilyKind::ParametricProjection:
      return parametric_projection_amplitudes(N, alpha, r);
  }
  throw ParameterError("unknown approximation family");
}

std::size_t projection_cutoff(std::size_t N, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const double x = eps * static_cast<double>(N);
  if (x < 1.0) {
    throw AsymptoticRegimeViolation("eps * N = " + std::to_string(x) +
                                    " < 1: the pair cutoff sqrt(eps N) is below one, outside the asymptotic regime");
  }
  // The relative nudge keeps exact squares such as eps N = 100 from rounding down.
  return static_cast<std::size_t>(std::floor(std::sqrt(x) * (1.0 + 1e-12)));
}

double log_tail_norm_deficit_closed(double r_N, std::size_t n_N) {
  if (n_N == 0) throw ParameterError("tail cutoff n_N must be >= 1");
  require_nonnegative_r(r_N);
  if (r_N == 0.0) return kNegInf;
  const double n = static_cast<double>(n_N);
  return log_cosh(r_N) + n * log_tanh_squared(r_N) - 0.5 * std::log(std::numbers::pi * n);
}

double tail_norm_deficit_closed(double r_N, std::size_t n_N) {
  return exp_or_zero(log_tail_norm_deficit_closed(r_N, n_N));
}

double log_tail_norm_deficit_direct(double r_N, std::size_t n_N, TailStart start) {
  require_nonnegative_r(r_N);
  if (r_N == 0.0) return kNegInf;
  const std::size_t first = start == TailStart::AboveCutoff ? n_N + 1 : n_N;
  const double ls = log_sech(r_N);
  const double lh = log_tanh(r_N) - std::numbers::ln2;
  const double lt2 = log_tanh_squared(r_N);

  // Terms decay roughly like tanh^{2n}; when that needs more than ~2e7 terms
  // the deficit is O(1) and the complement of the head sum is accurate.
  constexpr double kRelStop = 1e-20;
  if (-lt2 < 50.0 / 2e7) {
    CompensatedSum head;
    for (std::size_t n = 0; n < first; ++n) head.add(std::exp(log_skeleton_sq(n, ls, lh)));
    const double rest = 1.0 - head.value();
    return rest > 0.0 ? std::log(rest) : kNegInf;
  }

  const double l0 = log_skeleton_sq(first, ls, lh);
  std::vector<double> rel;
  double running = 0.0;
  for (std::size_t n = first;; ++n) {
    const double t = std::exp(log_skeleton_sq(n, ls, lh) - l0);
    rel.push_back(t);
    running += t;
    if (t < kRelStop * running) break;
  }
  CompensatedSum acc;
  for (auto it = rel.rbegin(); it != rel.rend(); ++it) acc.add(*it);
  return l0 + std::log(acc.value());
}

double tail_norm_deficit_direct(double r_N, std::size_t n_N) {
  return exp_or_zero(log_tail_norm_deficit_direct(r_N, n_N));
}

double parametric_norm_exact(std::size_t N, double alpha, double r) {
  require_alpha(alpha);
  require_nonnegative_r(r);
  if (r == 0.0) return 1.0;
  const double lx = 2.0 * (log_tanh(r) - std::numbers::ln2 - std::log(alpha));
  std::vector<double> terms(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    terms[n] = log_binomial(N, n) + log_factorial(2 * n) - log_factorial(n) + static_cast<double>(n) * lx;
  }
  return std::exp(log_sech(r) + log_sum_exp(terms));
}

double parametric_norm_first_order(std::size_t N, double alpha, double r) {
  require_alpha(alpha);
  const double s = std::sinh(r);
  return 1.0 + 0.5 * s * s * (static_cast<double>(N) / (alpha * alpha) - 1.0);
}

double parametric_norm_msq_deviation(double alpha, double r) {
  require_alpha(alpha);
  const double s = std::sinh(r);
  return s * s * s * s / (4.0 * alpha * alpha);
}

double parametric_norm_msq_deviation_direct(double alpha, double r, double eps, unsigned threads) {
  require_alpha(alpha);
  require_nonnegative_r(r);
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const double a2 = alpha * alpha;
  const double w = std::sqrt(2.0 * std::log(2.0 / eps)) / alpha;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(a2 * (1.0 - w))));
  const auto hi = static_cast<std::size_t>(std::ceil(a2 * (1.0 + w)));
  const CoherentWindow window = poisson_range(alpha, lo, hi);
  std::vector<double> contrib(window.size());
  parallel_for(window.size(), threads, [&](std::size_t i) {
    const double d = 1.0 - parametric_norm_exact(lo + i, alpha, r);
    contrib[i] = window.weights[i] * d * d;
  });
  CompensatedSum acc;
  for (double c : contrib) acc.add(c);
  return acc.value();
}

}  // namespace isosqueeze
