#pragma once

#include <cstddef>
#include <vector>

namespace isosqueeze {

/// A contiguous range of subspace indices N with coherent-pump (Poisson)
/// weights P_N = exp(-alpha^2) alpha^{2N} / N!.
struct CoherentWindow {
  double alpha = 0.0;
  double eps = 0.0;
  std::size_t N_min = 0;
  std::size_t N_max = 0;
  std::vector<double> log_weights;  ///< ln P_N for N = N_min..N_max
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return N_max - N_min + 1; }
  [[nodiscard]] double weight(std::size_t N) const;
  [[nodiscard]] double log_weight(std::size_t N) const;
  /// Total Poisson probability inside the window (compensated sum).
  [[nodiscard]] double mass() const;
};

[[nodiscard]] double log_poisson_weight(double alpha, std::size_t N);

/// Weights over an explicit range; no regime checks.
[[nodiscard]] CoherentWindow poisson_range(double alpha, std::size_t N_min, std::size_t N_max);

/// N_min = max(0, floor(alpha^2 (1 - w))), N_max = ceil(alpha^2 (1 + w)),
/// w = sqrt(2 ln(2/eps)) / alpha. Requires 0 < eps < 1, alpha >= 1 and
/// eps * alpha^2 >= 1.
[[nodiscard]] CoherentWindow confidence_window(double alpha, double eps);

}  // namespace isosqueeze
