#pragma once

#include <complex>
#include <cstddef>
#include <unordered_map>
#include <utility>

#include "isosqueeze/fock_dynamics.hpp"
#include "isosqueeze/observables.hpp"

namespace isosqueeze {

/// Sparse pump-signal state sum c_{m,k} |m>_pump |k>_signal.
class JointState {
 public:
  using Key = std::pair<std::size_t, std::size_t>;  // (pump photons, signal photons)
  using Amp = std::complex<double>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return k.first * 0x9E3779B97F4A7C15ull ^ k.second; }
  };
  using Map = std::unordered_map<Key, Amp, KeyHash>;

  void add(std::size_t pump, std::size_t signal, Amp amp);
  [[nodiscard]] const Map& entries() const { return entries_; }
  [[nodiscard]] double norm_squared() const;

  /// Signal-mode ladder operators; the pump is a spectator.
  [[nodiscard]] JointState lower() const;
  [[nodiscard]] JointState raise() const;
  [[nodiscard]] JointState scaled(Amp s) const;
  [[nodiscard]] JointState plus(const JointState& other) const;

  [[nodiscard]] Amp inner(const JointState& ket) const;  ///< <this|ket>

 private:
  Map entries_;
};

/// |N-n>|2n> weighted by amps[n].
[[nodiscard]] JointState joint_from_subspace(const SubspaceAmplitudes& a);

/// sum_N sqrt(P_N) sum_n Psi^N_n |N-n>|2n> over the confidence window.
[[nodiscard]] JointState joint_coherent(double alpha, double tau, double eps, EnsembleSource source,
                                        const EnsembleOptions& opts = {});

struct OddMoments {
  double b = 0.0;  ///< |<b>|
  double x_plus = 0.0;
  double x_minus = 0.0;
  double x_plus_cubed = 0.0;
  double x_minus_cubed = 0.0;

  [[nodiscard]] double max_abs() const;
};

/// |<X_+-^k>| for k = 1, 3 and |<b>|, by ladder algebra on the sparse state.
[[nodiscard]] OddMoments odd_moment_check(const JointState& state);
[[nodiscard]] OddMoments odd_moment_check(const SubspaceAmplitudes& a);

}  // namespace isosqueeze
