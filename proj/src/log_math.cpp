#include "isosqueeze/log_math.hpp"

#include <algorithm>
#include <numbers>

namespace isosqueeze {

double log_cosh(double r) {
  const double a = std::abs(r);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_sech(double r) { return -log_cosh(r); }

double log_tanh(double r) {
  if (r == 0.0) return kNegInf;
  if (r < 0.5) return std::log(std::tanh(r));
  // tanh r = 1 - 2e^{-2r}/(1 + e^{-2r})
  const double e = std::exp(-2.0 * r);
  return std::log1p(-2.0 * e / (1.0 + e));
}

double log_tanh_squared(double r) { return 2.0 * log_tanh(std::abs(r)); }

double sech_squared(double r) {
  const double e = std::exp(-2.0 * std::abs(r));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double log_factorial(std::size_t n) {
  const double x = static_cast<double>(n) + 1.0;
#if defined(__GLIBC__)
  // lgamma() writes the global signgam; the reentrant form keeps parallel
  // ensemble sums race-free.
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_central_binomial(std::size_t n) {
  return log_factorial(2 * n) - 2.0 * log_factorial(n);
}

double log_binomial(std::size_t N, std::size_t n) {
  return log_factorial(N) - log_factorial(n) - log_factorial(N - n);
}

double log_falling_factorial(std::size_t N, std::size_t n) {
  return log_factorial(N) - log_factorial(N - n);
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kNegInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(m)) return m;
  CompensatedSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}

}  // namespace isosqueeze
