#pragma once

// Signal-mode expectation values, per subspace and averaged over a coherent
// pump. Quadratures are X_+ = (b + b^dag)/2 and X_- = (b - b^dag)/(2i).

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "isosqueeze/fock_dynamics.hpp"
#include "isosqueeze/parallel.hpp"
#include "isosqueeze/window.hpp"

namespace isosqueeze {

/// Where the per-subspace amplitudes of an ensemble come from.
enum class EnsembleSource { Numeric, Isoenergetic };

struct EnsembleOptions {
  unsigned threads = default_thread_count();
  IntegratorConfig integrator{};
  /// Numeric source only: cap each subspace at suggested_pair_cap(N, r_N).
  bool auto_pair_cap = true;
};

/// sum_n 2n amps[n]^2.
[[nodiscard]] double mean_pairs_subspace(const SubspaceAmplitudes& a);

/// <b^2> inside one subspace: b^2 maps |N-n, 2n> to |N-n, 2n-2>, which lies
/// in H_{N-1}, so the diagonal expectation is identically zero.
[[nodiscard]] double b_squared_subspace(const SubspaceAmplitudes& a);

/// Amplitudes for every N in [first, last] at common tau (each subspace then
/// has r_N = 2 sqrt(N) tau). Only the prefix up to the last nonzero entry is
/// stored, which keeps a window of ~1e3 subspaces with N ~ 1e4 small.
struct EnsembleAmplitudes {
  std::size_t first = 0;
  std::vector<std::vector<double>> prefix;

  [[nodiscard]] const std::vector<double>& at(std::size_t N) const { return prefix[N - first]; }
};

[[nodiscard]] EnsembleAmplitudes ensemble_amplitudes(std::size_t first, std::size_t last, double tau,
                                                     EnsembleSource source, const EnsembleOptions& opts = {});

/// Poisson average of mean_pairs_subspace over the confidence window,
/// divided by the window mass.
[[nodiscard]] double coherent_mean_photons_direct(double alpha, double tau, double eps, EnsembleSource source,
                                                  const EnsembleOptions& opts = {});

inline constexpr std::size_t kStirlingCap = 170;

/// Stirling number of the second kind {k brace p}, k, p <= kStirlingCap.
[[nodiscard]] double stirling2(std::size_t k, std::size_t p);

/// k-th raw moment of Poisson(alpha^2): sum_p {k brace p} alpha^{2p}.
[[nodiscard]] double poisson_moment(std::size_t k, double alpha);

struct SeriesResult {
  double value = 0.0;
  double remainder = 0.0;  ///< magnitude of the last retained terms
};

/// sinh^2 r + (1/2) sum_{p=1}^{p_max} (2r)^{2p}/(2p)! h_p(r / 2 alpha), with
///   h_p(x) = sum_{i=1}^{i_max} {p+i brace p} (4x)^{2i} / ((2p+1)...(2p+2i)).
/// Throws DivergentSeries when the last retained terms are not decreasing.
[[nodiscard]] SeriesResult coherent_mean_photons_series(double alpha, double r, std::size_t p_max = 40,
                                                        std::size_t i_max = 10);

/// e^{r^2/2a^2} sinh^2 r + (e^{r^2/2a^2} - 1)/2.
[[nodiscard]] double coherent_mean_photons_approx(double alpha, double r);

/// e^{2 sign r + r^2/2a^2} / 4.
[[nodiscard]] double quadrature_variance_approx(double alpha, double r, int sign);

enum class BSquaredMode { ExactCross, TanhApprox };

/// ExactCross: sum_N sqrt(P_N P_{N-1}) sum_n Psi^N_n Psi^{N-1}_{n-1} sqrt(2n(2n-1)).
/// TanhApprox: Poisson average of tanh r_N (sinh^2 r_N + 1).
/// Both divided by the window mass.
[[nodiscard]] double b_squared_coherent(double alpha, double tau, double eps, BSquaredMode mode,
                                        EnsembleSource source = EnsembleSource::Isoenergetic,
                                        const EnsembleOptions& opts = {});

/// (<b^dag b> + sign <b^2> + 1/2) / 2 from the direct ensemble sums.
[[nodiscard]] double quadrature_variance_exact(double alpha, double tau, double eps, int sign,
                                               EnsembleSource source = EnsembleSource::Isoenergetic,
                                               const EnsembleOptions& opts = {});

// Second-order perturbative corrections, nu = 1/alpha, s = sinh r, c = cosh r:
//   f_mean = [r^2 (2 + s^-2) + 2rc/s - 3s^2 - 3] / 4
//   f_sq   = [r^2 - 2r(s^2 + cs + 1) + s^4 + cs^3 + s^2 + 2cs] / 2
[[nodiscard]] double f_mean(double r);
[[nodiscard]] double f_sq(double r);
/// s^2 (1 + f_mean / alpha^2).
[[nodiscard]] double perturbative_mean(double alpha, double r);
/// (e^{-2r}/4)(1 + f_sq / alpha^2).
[[nodiscard]] double perturbative_sq_variance(double alpha, double r);

/// Smallest n with sum_{k<=n} c_k(r)^2 >= 1 - 1e-12.
[[nodiscard]] std::size_t default_density_cutoff(double r);

/// rho_{2n,2m} = sum_M sqrt(P_{M+n} P_{M+m}) Psi^{(M+n)}_n Psi^{(M+m)}_m over
/// pump photon numbers M with both subspaces inside the window; indices
/// 0..n_max. Built as C^T C so it is symmetric positive semidefinite. No
/// trace renormalization.
[[nodiscard]] Eigen::MatrixXd signal_density_matrix(double alpha, double tau, double eps, std::size_t n_max,
                                                    EnsembleSource source = EnsembleSource::Isoenergetic,
                                                    const EnsembleOptions& opts = {});

enum class ObservableMethod { ExactNumeric, IsoenergeticFormula, IsoenergeticDirect, ParametricZeroth, PerturbativeSecond };

[[nodiscard]] const char* to_string(ObservableMethod m);
[[nodiscard]] std::optional<ObservableMethod> parse_method(const std::string& name);

/// The exact-numeric ensemble integrates every subspace in the window; it is
/// refused above this pump amplitude.
inline constexpr double kExactNumericAlphaCap = 150.0;

struct ObservableReport {
  ObservableMethod method = ObservableMethod::ParametricZeroth;
  double alpha = 0.0;
  double r = 0.0;
  double eps = 0.0;
  double mean_pairs_photons = 0.0;
  double var_x_minus = 0.0;
  std::optional<double> var_x_plus;
  std::optional<double> b_squared;
  std::optional<double> uncertainty_product;
  std::optional<double> window_mass;     ///< ensemble methods only
  std::optional<double> odd_moment_max;  ///< ensemble methods only
};

[[nodiscard]] ObservableReport observable_report(double alpha, double r, double eps, ObservableMethod method,
                                                 const EnsembleOptions& opts = {});

}  // namespace isosqueeze
