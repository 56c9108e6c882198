#include "isosqueeze/fock_dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/log_math.hpp"

namespace isosqueeze {

const char* to_string(AmplitudeKind kind) {
  switch (kind) {
    case AmplitudeKind::Numeric: return "numeric";
    case AmplitudeKind::Isoenergetic: return "isoenergetic";
    case AmplitudeKind::Parametric: return "parametric";
  }
  return "unknown";
}

SubspaceAmplitudes SubspaceAmplitudes::vacuum(std::size_t N, AmplitudeKind kind) {
  SubspaceAmplitudes s{N, std::vector<double>(N + 1, 0.0), kind, 0.0};
  s.amps[0] = 1.0;
  return s;
}

BetaLadder beta_ladder(std::size_t N) {
  BetaLadder ladder{N, std::vector<double>(N + 1)};
  for (std::size_t n = 0; n <= N; ++n) {
    const double dn = static_cast<double>(n);
    ladder.beta[n] = static_cast<double>(N - n) * (2.0 * dn + 1.0) * (2.0 * dn + 2.0);
  }
  return ladder;
}

void IntegratorConfig::validate() const {
  if (const auto* s = std::get_if<SpectralSafety>(&step_mode)) {
    if (!(s->safety > 0.0 && s->safety <= 1.0)) throw ParameterError("integrator safety factor must lie in (0, 1]");
  } else if (std::get<FixedCount>(step_mode).steps == 0) {
    throw ParameterError("fixed step count must be positive");
  }
  if (truncation && !(truncation->tail_mass_threshold > 0.0 && truncation->tail_mass_threshold < 1.0)) {
    throw ParameterError("tail-mass threshold must lie in (0, 1)");
  }
  if (!(norm_drift_tolerance > 0.0)) throw ParameterError("norm drift tolerance must be positive");
}

namespace {

// sqrt(beta_n) for the retained indices; the last entry is zero (natural
// boundary at n = N, hard wall at a truncation cap).
std::vector<double> couplings(std::size_t N, std::size_t dim) {
  std::vector<double> s(dim, 0.0);
  for (std::size_t n = 0; n + 1 < dim; ++n) {
    const double dn = static_cast<double>(n);
    s[n] = std::sqrt(static_cast<double>(N - n) * (2.0 * dn + 1.0) * (2.0 * dn + 2.0));
  }
  return s;
}

std::size_t retained_dim(std::size_t N, const IntegratorConfig& cfg) {
  if (cfg.truncation && cfg.truncation->max_pair_index < N) return cfg.truncation->max_pair_index + 1;
  return N + 1;
}

std::size_t steps_for(const std::vector<double>& s, double dtau, const IntegratorConfig& cfg) {
  if (dtau == 0.0) return 0;
  if (const auto* fixed = std::get_if<FixedCount>(&cfg.step_mode)) return fixed->steps;
  const double smax = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  if (smax == 0.0) return 0;
  const double h_max = std::get<SpectralSafety>(cfg.step_mode).safety * 2.8 / (2.0 * smax);
  return std::max(kMinSpectralSteps, static_cast<std::size_t>(std::ceil(std::abs(dtau) / h_max)));
}

void apply_generator(const std::vector<double>& s, const std::vector<double>& in, std::vector<double>& out) {
  const std::size_t d = in.size();
  if (d == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = -s[0] * in[1];
  for (std::size_t n = 1; n + 1 < d; ++n) out[n] = s[n - 1] * in[n - 1] - s[n] * in[n + 1];
  out[d - 1] = s[d - 2] * in[d - 2];
}

double euclidean_norm(std::span<const double> v) {
  CompensatedSum acc;
  for (double x : v) acc.add(x * x);
  return std::sqrt(acc.value());
}

}  // namespace

std::size_t step_count(std::size_t N, double dtau, const IntegratorConfig& cfg) {
  cfg.validate();
  return steps_for(couplings(N, retained_dim(N, cfg)), dtau, cfg);
}

SubspaceAmplitudes propagate(const SubspaceAmplitudes& start, double dtau, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(dtau)) throw ParameterError("integration time must be finite");
  if (start.amps.size() != start.N + 1) throw ParameterError("amplitude vector length must be N + 1");

  const std::size_t N = start.N;
  const std::size_t dim = retained_dim(N, cfg);
  for (std::size_t n = dim; n <= N; ++n) {
    if (start.amps[n] != 0.0) throw ParameterError("initial state has support above the pair-index cap");
  }

  const auto s = couplings(N, dim);
  const std::size_t steps = steps_for(s, dtau, cfg);
  std::vector<double> psi(start.amps.begin(), start.amps.begin() + static_cast<std::ptrdiff_t>(dim));
  const double norm0 = euclidean_norm(psi);

  const bool monitor_tail = dim < N + 1;
  const std::size_t window = std::max<std::size_t>(1, dim / 20);
  const double threshold = monitor_tail ? cfg.truncation->tail_mass_threshold : 0.0;

  if (steps > 0) {
    const double h = dtau / static_cast<double>(steps);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (std::size_t step = 0; step < steps; ++step) {
      apply_generator(s, psi, k1);
      for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + 0.5 * h * k1[n];
      apply_generator(s, tmp, k2);
      for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + 0.5 * h * k2[n];
      apply_generator(s, tmp, k3);
      for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + h * k3[n];
      apply_generator(s, tmp, k4);
      for (std::size_t n = 0; n < dim; ++n) psi[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);

      if (monitor_tail) {
        double mass = 0.0;
        for (std::size_t n = dim - window; n < dim; ++n) mass += psi[n] * psi[n];
        if (mass > threshold) {
          std::ostringstream msg;
          msg << "tail mass " << mass << " above index " << (dim - window) << " exceeds threshold " << threshold
              << " (N=" << N << ", cap=" << dim - 1 << ")";
          throw TruncationTailExceeded(msg.str());
        }
      }
    }
  }

  const double drift = std::abs(euclidean_norm(psi) - norm0);
  if (drift > cfg.norm_drift_tolerance) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " exceeds tolerance " << cfg.norm_drift_tolerance << " (N=" << N << ", steps="
        << steps << ")";
    throw NormDriftExceeded(msg.str());
  }

  SubspaceAmplitudes out{N, std::vector<double>(N + 1, 0.0), AmplitudeKind::Numeric, start.tau + dtau};
  std::copy(psi.begin(), psi.end(), out.amps.begin());
  return out;
}

SubspaceAmplitudes integrate_subspace(std::size_t N, double tau_final, const IntegratorConfig& cfg) {
  if (!std::isfinite(tau_final) || tau_final < 0.0) throw ParameterError("tau_final must be finite and >= 0");
  return propagate(SubspaceAmplitudes::vacuum(N), tau_final, cfg);
}

double tau_for_squeezing(std::size_t N, double r) {
  if (N == 0) throw ParameterError("tau_for_squeezing needs N >= 1");
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("squeezing parameter must be finite and >= 0");
  return r / (2.0 * std::sqrt(static_cast<double>(N)));
}

SubspaceAmplitudes oracle_eigensolve(std::size_t N, double tau_final) {
  if (N > kOracleDimensionCap) {
    throw DimensionCapExceeded("oracle_eigensolve is limited to N <= " + std::to_string(kOracleDimensionCap));
  }
  if (!std::isfinite(tau_final)) throw ParameterError("tau_final must be finite");
  SubspaceAmplitudes out = SubspaceAmplitudes::vacuum(N);
  out.tau = tau_final;
  if (N == 0 || tau_final == 0.0) return out;

  // The generator A (A[n+1][n] = s_n, A[n][n+1] = -s_n) equals i D^-1 T D
  // with T the symmetric tridiagonal matrix of off-diagonals s_n and
  // D = diag(i^n). Hence Psi_n = Re( i^-n sum_k V_nk V_0k exp(i tau lambda_k) ).
  const auto s = couplings(N, N + 1);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N + 1));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(N));
  for (std::size_t n = 0; n < N; ++n) sub[static_cast<Eigen::Index>(n)] = s[n];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericGuardError("tridiagonal eigensolver did not converge");

  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& V = solver.eigenvectors();
  const Eigen::Index dim = lambda.size();
  Eigen::VectorXd c(dim), sn(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    c[k] = V(0, k) * std::cos(tau_final * lambda[k]);
    sn[k] = V(0, k) * std::sin(tau_final * lambda[k]);
  }
  const Eigen::VectorXd cos_part = V * c;
  const Eigen::VectorXd sin_part = V * sn;
  for (std::size_t n = 0; n <= N; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    switch (n % 4) {
      case 0: out.amps[n] = cos_part[i]; break;
      case 1: out.amps[n] = sin_part[i]; break;
      case 2: out.amps[n] = -cos_part[i]; break;
      default: out.amps[n] = -sin_part[i]; break;
    }
  }
  return out;
}

double state_distance(const SubspaceAmplitudes& a, const SubspaceAmplitudes& b) {
  if (a.N != b.N) {
    throw MismatchedSubspace("state_distance needs equal subspaces (N=" + std::to_string(a.N) + " vs " +
                             std::to_string(b.N) + ")");
  }
  const std::size_t len = std::max(a.amps.size(), b.amps.size());
  CompensatedSum acc;
  for (std::size_t n = 0; n < len; ++n) {
    const double x = (n < a.amps.size() ? a.amps[n] : 0.0) - (n < b.amps.size() ? b.amps[n] : 0.0);
    acc.add(x * x);
  }
  return std::sqrt(acc.value());
}

double subspace_norm(const SubspaceAmplitudes& a) { return euclidean_norm(a.amps); }

StepHalvingReport step_halving_report(std::size_t N, double tau_final, std::size_t base_steps) {
  auto run = [&](std::size_t steps) {
    IntegratorConfig cfg;
    cfg.step_mode = FixedCount{steps};
    cfg.norm_drift_tolerance = 1.0;  // coarse runs are expected to drift
    return integrate_subspace(N, tau_final, cfg);
  };
  const auto a = run(base_steps);
  const auto b = run(2 * base_steps);
  const auto c = run(4 * base_steps);
  StepHalvingReport report{base_steps, 0.0, 0.0};
  for (std::size_t n = 0; n <= N; ++n) {
    report.change_coarse = std::max(report.change_coarse, std::abs(a.amps[n] - b.amps[n]));
    report.change_fine = std::max(report.change_fine, std::abs(b.amps[n] - c.amps[n]));
  }
  return report;
}

std::size_t suggested_pair_cap(std::size_t N, double r_N) {
  constexpr double kLogFloor = -46.0;  // ~1e-20
  std::size_t n = 1;
  if (r_N > 0.0) {
    const double lt2 = log_tanh_squared(r_N);
    const double lc = log_cosh(r_N);
    // Tail estimate cosh r * tanh^{2n} r / sqrt(pi n) from the closed form.
    while (lc + static_cast<double>(n) * lt2 - 0.5 * std::log(std::numbers::pi * static_cast<double>(n)) > kLogFloor &&
           n < N) {
      n = n < 16 ? n + 1 : n + n / 8;
    }
  }
  return std::min(N, 2 * n + 64);
}

}  // namespace isosqueeze
