#pragma once

// Closed-form amplitude families and their norm/tail results.
//
// All three families share the Gaussian squeezed-vacuum skeleton
//   c_n(r) = sqrt(sech r) * sqrt(C(2n, n)) * (tanh r / 2)^n,
// which is evaluated in log form so that n ~ 1e5 never underflows.

#include <cstddef>

#include "isosqueeze/fock_dynamics.hpp"
#include "isosqueeze/log_math.hpp"

namespace isosqueeze {

/// Amplitude of |2n> in the squeezed vacuum |r>. 0^0 = 1, so r = 0 gives
/// delta_{n,0}. Negative r is rejected.
[[nodiscard]] LogAmplitude squeezed_amplitude(std::size_t n, double r);

/// Leading-order isoenergetic amplitudes c_n(r_N), r_N = 2 sqrt(N) tau,
/// for 0 <= n <= N. Not renormalized: the tail beyond N is simply dropped.
[[nodiscard]] SubspaceAmplitudes isoenergetic_amplitudes(std::size_t N, double tau);

/// How the pump-depletion factor (N)_n enters the parametric projection.
///   Amplitude:   c_n(r) * sqrt((N)_n) / alpha^n      (the projection of a
///                coherent pump times squeezed signal onto H_N)
///   Probability: c_n(r) * (N)_n / alpha^{2n}
/// The second form is what the reference distance table was built with.
enum class DepletionWeight { Amplitude, Probability };

[[nodiscard]] SubspaceAmplitudes parametric_projection_amplitudes(std::size_t N, double alpha, double r,
                                                                  DepletionWeight weight = DepletionWeight::Amplitude);

enum class FamilyKind { GaussianSqueezed, Isoenergetic, ParametricProjection };

/// A closed-form family together with its parameters. For the isoenergetic
/// family `r` is r_N; GaussianSqueezed ignores alpha and is cut at n = N.
struct ApproximationFamily {
  FamilyKind kind = FamilyKind::GaussianSqueezed;
  std::size_t N = 0;
  double alpha = 0.0;
  double r = 0.0;

  [[nodiscard]] SubspaceAmplitudes amplitudes() const;
};

/// n_N = floor(sqrt(eps N)). Rejects eps * N < 1 (AsymptoticRegimeViolation).
[[nodiscard]] std::size_t projection_cutoff(std::size_t N, double eps);

/// cosh(r_N) tanh(r_N)^{2 n_N} / sqrt(pi n_N).
[[nodiscard]] double tail_norm_deficit_closed(double r_N, std::size_t n_N);
[[nodiscard]] double log_tail_norm_deficit_closed(double r_N, std::size_t n_N);

/// Which indices a directly summed tail covers.
enum class TailStart { AboveCutoff, AtCutoff };  // n > n_N, n >= n_N

/// Sum of c_n(r_N)^2 over the tail, accumulated from the smallest term
/// upward. Summation stops once terms drop below 1e-20 of the running total,
/// so the result stays meaningful when the deficit itself is below 1e-300.
[[nodiscard]] double log_tail_norm_deficit_direct(double r_N, std::size_t n_N,
                                                  TailStart start = TailStart::AboveCutoff);
[[nodiscard]] double tail_norm_deficit_direct(double r_N, std::size_t n_N);

/// sech r * sum_{n=0}^{N} C(N,n) (2n)!/n! (tanh r / 2 alpha)^{2n}; the
/// squared norm of the Amplitude-weighted parametric projection.
[[nodiscard]] double parametric_norm_exact(std::size_t N, double alpha, double r);

/// 1 + (sinh^2 r / 2)(N / alpha^2 - 1).
[[nodiscard]] double parametric_norm_first_order(std::size_t N, double alpha, double r);

/// sinh^4 r / (4 alpha^2), the Poisson-mean of (1 - norm)^2 to leading order.
[[nodiscard]] double parametric_norm_msq_deviation(double alpha, double r);

/// sum_N P_N (1 - parametric_norm_exact(N))^2 over the window that holds all
/// but `eps` of the Poisson weight (no regime check on eps).
[[nodiscard]] double parametric_norm_msq_deviation_direct(double alpha, double r, double eps = 1e-12,
                                                          unsigned threads = 1);

}  // namespace isosqueeze
