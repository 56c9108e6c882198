#include "isosqueeze/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/log_math.hpp"

namespace isosqueeze {

double log_poisson_weight(double alpha, std::size_t N) {
  if (alpha == 0.0) return N == 0 ? 0.0 : kNegInf;
  return -alpha * alpha + 2.0 * static_cast<double>(N) * std::log(alpha) - log_factorial(N);
}

double CoherentWindow::weight(std::size_t N) const {
  return N < N_min || N > N_max ? 0.0 : weights[N - N_min];
}

double CoherentWindow::log_weight(std::size_t N) const {
  return N < N_min || N > N_max ? kNegInf : log_weights[N - N_min];
}

double CoherentWindow::mass() const {
  CompensatedSum acc;
  for (double w : weights) acc.add(w);
  return acc.value();
}

CoherentWindow poisson_range(double alpha, std::size_t N_min, std::size_t N_max) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and >= 0");
  if (N_max < N_min) throw ParameterError("empty Poisson range");
  CoherentWindow w;
  w.alpha = alpha;
  w.N_min = N_min;
  w.N_max = N_max;
  w.log_weights.resize(w.size());
  w.weights.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w.log_weights[i] = log_poisson_weight(alpha, N_min + i);
    w.weights[i] = exp_or_zero(w.log_weights[i]);
  }
  return w;
}

CoherentWindow confidence_window(double alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and >= 1");
  const double a2 = alpha * alpha;
  if (eps * a2 < 1.0) {
    throw AsymptoticRegimeViolation("eps * alpha^2 = " + std::to_string(eps * a2) +
                                    " < 1: requested error is below what the asymptotic formulas resolve");
  }
  const double half = std::sqrt(2.0 * std::log(2.0 / eps)) / alpha;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(a2 * (1.0 - half))));
  const auto hi = static_cast<std::size_t>(std::ceil(a2 * (1.0 + half)));
  CoherentWindow w = poisson_range(alpha, lo, hi);
  w.eps = eps;
  return w;
}

}  // namespace isosqueeze
