#pragma once

// Exact dynamics of degenerate downconversion inside one energy subspace H_N.
//
// The subspace is spanned by |N-n>|2n>, n = 0..N (pump photons, signal
// photons). In dimensionless time tau = kappa*t the real amplitudes obey
//
//   dPsi_n/dtau = sqrt(beta_{n-1}) Psi_{n-1} - sqrt(beta_n) Psi_{n+1},
//   beta_n = (N - n)(2n + 1)(2n + 2),   Psi_n(0) = delta_{n,0}.
//
// The generator is real skew-symmetric and tridiagonal, so the evolution is
// orthogonal and the amplitudes stay real.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace isosqueeze {

enum class AmplitudeKind { Numeric, Isoenergetic, Parametric };

const char* to_string(AmplitudeKind kind);

/// Amplitudes Psi_n, n = 0..N, of one subspace state. amps.size() == N + 1.
struct SubspaceAmplitudes {
  std::size_t N = 0;
  std::vector<double> amps;
  AmplitudeKind kind = AmplitudeKind::Numeric;
  double tau = 0.0;

  [[nodiscard]] static SubspaceAmplitudes vacuum(std::size_t N, AmplitudeKind kind = AmplitudeKind::Numeric);
};

struct BetaLadder {
  std::size_t N = 0;
  std::vector<double> beta;  ///< beta[n] for n = 0..N; beta[N] == 0
};

[[nodiscard]] BetaLadder beta_ladder(std::size_t N);

struct FixedCount {
  std::size_t steps = 1;
};

/// Step h = safety * 2.8 / (2 max_n sqrt(beta_n)); 2.8 sits just under the
/// RK4 stability limit 2*sqrt(2) on the imaginary axis. Small subspaces
/// populate their fastest modes, so at least kMinSpectralSteps are taken.
inline constexpr std::size_t kMinSpectralSteps = 256;

struct SpectralSafety {
  double safety = 0.25;
};

/// Evolve only n <= max_pair_index (hard wall at the cap). The mass in the
/// top 5% of retained indices is monitored; crossing the threshold aborts.
struct PairTruncation {
  std::size_t max_pair_index = 0;
  double tail_mass_threshold = 1e-12;
};

struct IntegratorConfig {
  std::variant<FixedCount, SpectralSafety> step_mode = SpectralSafety{};
  std::optional<PairTruncation> truncation;
  double norm_drift_tolerance = 1e-9;

  void validate() const;
};

/// Number of RK4 steps `cfg` uses to cover |dtau| on a subspace of the given size.
[[nodiscard]] std::size_t step_count(std::size_t N, double dtau, const IntegratorConfig& cfg);

/// Evolves `start` by dtau (negative dtau runs the generator backwards).
[[nodiscard]] SubspaceAmplitudes propagate(const SubspaceAmplitudes& start, double dtau,
                                           const IntegratorConfig& cfg = {});

/// Evolves delta_{n,0} to tau_final with classical RK4.
[[nodiscard]] SubspaceAmplitudes integrate_subspace(std::size_t N, double tau_final,
                                                    const IntegratorConfig& cfg = {});

/// tau such that r_N = 2 sqrt(N) tau equals r.
[[nodiscard]] double tau_for_squeezing(std::size_t N, double r);

inline constexpr std::size_t kOracleDimensionCap = 2000;

/// Independent reference: exact exponentiation of the generator through the
/// spectral decomposition of the symmetric tridiagonal matrix it is similar to.
[[nodiscard]] SubspaceAmplitudes oracle_eigensolve(std::size_t N, double tau_final);

/// Euclidean distance; the shorter vector is zero-padded. Requires equal N.
[[nodiscard]] double state_distance(const SubspaceAmplitudes& a, const SubspaceAmplitudes& b);

[[nodiscard]] double subspace_norm(const SubspaceAmplitudes& a);

/// Max-abs amplitude changes between step counts s -> 2s and 2s -> 4s.
/// For a 4th-order scheme the ratio first/second approaches 16.
struct StepHalvingReport {
  std::size_t base_steps = 0;
  double change_coarse = 0.0;
  double change_fine = 0.0;
};

[[nodiscard]] StepHalvingReport step_halving_report(std::size_t N, double tau_final, std::size_t base_steps);

/// Pair-index cap that keeps everything above ~1e-20 probability for a state
/// squeezed by r_N, with generous headroom; never exceeds N.
[[nodiscard]] std::size_t suggested_pair_cap(std::size_t N, double r_N);

}  // namespace isosqueeze
