#include "isosqueeze/joint_state.hpp"

#include <algorithm>
#include <cmath>

#include "isosqueeze/log_math.hpp"
#include "isosqueeze/window.hpp"

namespace isosqueeze {

void JointState::add(std::size_t pump, std::size_t signal, Amp amp) {
  if (amp == Amp{}) return;
  entries_[{pump, signal}] += amp;
}

double JointState::norm_squared() const {
  CompensatedSum acc;
  for (const auto& [key, amp] : entries_) acc.add(std::norm(amp));
  return acc.value();
}

JointState JointState::lower() const {
  JointState out;
  for (const auto& [key, amp] : entries_) {
    if (key.second == 0) continue;
    out.add(key.first, key.second - 1, amp * std::sqrt(static_cast<double>(key.second)));
  }
  return out;
}

JointState JointState::raise() const {
  JointState out;
  for (const auto& [key, amp] : entries_) {
    out.add(key.first, key.second + 1, amp * std::sqrt(static_cast<double>(key.second) + 1.0));
  }
  return out;
}

JointState JointState::scaled(Amp s) const {
  JointState out;
  for (const auto& [key, amp] : entries_) out.add(key.first, key.second, amp * s);
  return out;
}

JointState JointState::plus(const JointState& other) const {
  JointState out = *this;
  for (const auto& [key, amp] : other.entries_) out.add(key.first, key.second, amp);
  return out;
}

JointState::Amp JointState::inner(const JointState& ket) const {
  const bool this_smaller = entries_.size() <= ket.entries_.size();
  const Map& small = this_smaller ? entries_ : ket.entries_;
  const Map& large = this_smaller ? ket.entries_ : entries_;
  Amp sum{};
  for (const auto& [key, amp] : small) {
    const auto it = large.find(key);
    if (it == large.end()) continue;
    sum += this_smaller ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return sum;
}

JointState joint_from_subspace(const SubspaceAmplitudes& a) {
  JointState out;
  for (std::size_t n = 0; n < a.amps.size() && n <= a.N; ++n) out.add(a.N - n, 2 * n, a.amps[n]);
  return out;
}

JointState joint_coherent(double alpha, double tau, double eps, EnsembleSource source, const EnsembleOptions& opts) {
  const CoherentWindow w = confidence_window(alpha, eps);
  const auto ens = ensemble_amplitudes(w.N_min, w.N_max, tau, source, opts);
  JointState out;
  for (std::size_t N = w.N_min; N <= w.N_max; ++N) {
    const auto& a = ens.at(N);
    const double sp = std::sqrt(w.weight(N));
    for (std::size_t n = 0; n < a.size() && n <= N; ++n) out.add(N - n, 2 * n, sp * a[n]);
  }
  return out;
}

double OddMoments::max_abs() const { return std::max({b, x_plus, x_minus, x_plus_cubed, x_minus_cubed}); }

namespace {

using Amp = JointState::Amp;

// X_+ = (b + b^dag)/2, X_- = (b - b^dag)/(2i)
JointState apply_x(const JointState& s, int sign) {
  const JointState lo = s.lower();
  const JointState hi = s.raise();
  if (sign > 0) return lo.plus(hi).scaled(0.5);
  return lo.plus(hi.scaled(-1.0)).scaled(Amp{0.0, -0.5});
}

}  // namespace

OddMoments odd_moment_check(const JointState& state) {
  OddMoments m;
  m.b = std::abs(state.inner(state.lower()));
  for (int sign : {+1, -1}) {
    const JointState x1 = apply_x(state, sign);
    const JointState x3 = apply_x(apply_x(x1, sign), sign);
    const double first = std::abs(state.inner(x1));
    const double third = std::abs(state.inner(x3));
    (sign > 0 ? m.x_plus : m.x_minus) = first;
    (sign > 0 ? m.x_plus_cubed : m.x_minus_cubed) = third;
  }
  return m;
}

OddMoments odd_moment_check(const SubspaceAmplitudes& a) { return odd_moment_check(joint_from_subspace(a)); }

}  // namespace isosqueeze
