#include "isosqueeze/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isosqueeze/closed_form.hpp"
#include "isosqueeze/errors.hpp"
#include "isosqueeze/joint_state.hpp"
#include "isosqueeze/log_math.hpp"

namespace isosqueeze {

namespace {

// Amplitudes below this magnitude are dropped from ensemble prefixes; their
// squares sit ~50 orders below anything a double sum can register.
constexpr double kPrefixFloor = 1e-25;

void require_sign(int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("quadrature sign must be +1 or -1");
}

void require_alpha_r(double alpha, double r) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("squeezing parameter must be finite and >= 0");
}

double require_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("tau must be finite and >= 0");
  return tau;
}

std::vector<double> trimmed(std::vector<double> amps) {
  std::size_t len = amps.size();
  while (len > 1 && std::abs(amps[len - 1]) < kPrefixFloor) --len;
  amps.resize(len);
  return amps;
}

double prefix_mean(const std::vector<double>& a) {
  CompensatedSum acc;
  for (std::size_t n = 1; n < a.size(); ++n) acc.add(2.0 * static_cast<double>(n) * a[n] * a[n]);
  return acc.value();
}

// sum_n Psi^N_n Psi^{N-1}_{n-1} sqrt(2n(2n-1))
double prefix_cross(const std::vector<double>& upper, const std::vector<double>& lower) {
  CompensatedSum acc;
  const std::size_t len = std::min(upper.size(), lower.size() + 1);
  for (std::size_t n = 1; n < len; ++n) {
    const double dn = static_cast<double>(n);
    acc.add(upper[n] * lower[n - 1] * std::sqrt(2.0 * dn * (2.0 * dn - 1.0)));
  }
  return acc.value();
}

struct EnsembleSums {
  double mass = 0.0;
  double mean = 0.0;
  double b_squared = 0.0;
};

// Window-normalized <b^dag b> and exact-cross <b^2>. `ens` must start at
// max(0, N_min - 1).
EnsembleSums ensemble_sums(const CoherentWindow& w, const EnsembleAmplitudes& ens) {
  CompensatedSum mean, cross;
  for (std::size_t N = w.N_min; N <= w.N_max; ++N) {
    mean.add(w.weight(N) * prefix_mean(ens.at(N)));
    if (N == 0) continue;
    const double lp = 0.5 * (w.log_weight(N) + log_poisson_weight(w.alpha, N - 1));
    cross.add(exp_or_zero(lp) * prefix_cross(ens.at(N), ens.at(N - 1)));
  }
  EnsembleSums s;
  s.mass = w.mass();
  s.mean = mean.value() / s.mass;
  s.b_squared = cross.value() / s.mass;
  return s;
}

EnsembleAmplitudes window_ensemble(const CoherentWindow& w, double tau, EnsembleSource source,
                                   const EnsembleOptions& opts) {
  return ensemble_amplitudes(w.N_min == 0 ? 0 : w.N_min - 1, w.N_max, tau, source, opts);
}

}  // namespace

double mean_pairs_subspace(const SubspaceAmplitudes& a) { return prefix_mean(a.amps); }

double b_squared_subspace(const SubspaceAmplitudes&) { return 0.0; }

EnsembleAmplitudes ensemble_amplitudes(std::size_t first, std::size_t last, double tau, EnsembleSource source,
                                       const EnsembleOptions& opts) {
  require_tau(tau);
  if (last < first) throw ParameterError("empty subspace range");
  opts.integrator.validate();
  EnsembleAmplitudes out;
  out.first = first;
  out.prefix.resize(last - first + 1);
  parallel_for(out.prefix.size(), opts.threads, [&](std::size_t i) {
    const std::size_t N = first + i;
    if (N == 0) {
      out.prefix[i] = {1.0};
      return;
    }
    if (source == EnsembleSource::Isoenergetic) {
      out.prefix[i] = trimmed(isoenergetic_amplitudes(N, tau).amps);
      return;
    }
    IntegratorConfig cfg = opts.integrator;
    if (opts.auto_pair_cap && !cfg.truncation) {
      const double r_N = 2.0 * std::sqrt(static_cast<double>(N)) * tau;
      const std::size_t cap = suggested_pair_cap(N, r_N);
      if (cap < N) cfg.truncation = PairTruncation{cap};
    }
    out.prefix[i] = trimmed(integrate_subspace(N, tau, cfg).amps);
  });
  return out;
}

double coherent_mean_photons_direct(double alpha, double tau, double eps, EnsembleSource source,
                                    const EnsembleOptions& opts) {
  const CoherentWindow w = confidence_window(alpha, eps);
  const auto ens = ensemble_amplitudes(w.N_min, w.N_max, require_tau(tau), source, opts);
  CompensatedSum acc;
  for (std::size_t N = w.N_min; N <= w.N_max; ++N) acc.add(w.weight(N) * prefix_mean(ens.at(N)));
  return acc.value() / w.mass();
}

double stirling2(std::size_t k, std::size_t p) {
  if (k > kStirlingCap || p > kStirlingCap) {
    throw StirlingCapExceeded("Stirling numbers are tabulated for k, p <= " + std::to_string(kStirlingCap));
  }
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t(kStirlingCap + 1, std::vector<double>(kStirlingCap + 1, 0.0));
    t[0][0] = 1.0;
    for (std::size_t kk = 1; kk <= kStirlingCap; ++kk) {
      for (std::size_t pp = 1; pp <= kk; ++pp) {
        t[kk][pp] = static_cast<double>(pp) * t[kk - 1][pp] + t[kk - 1][pp - 1];
      }
    }
    return t;
  }();
  return p > k ? 0.0 : table[k][p];
}

double poisson_moment(std::size_t k, double alpha) {
  if (k > kStirlingCap) {
    throw StirlingCapExceeded("Poisson moments are available for k <= " + std::to_string(kStirlingCap));
  }
  const double a2 = alpha * alpha;
  CompensatedSum acc;
  double power = 1.0;
  for (std::size_t p = 0; p <= k; ++p) {
    acc.add(stirling2(k, p) * power);
    power *= a2;
  }
  return acc.value();
}

SeriesResult coherent_mean_photons_series(double alpha, double r, std::size_t p_max, std::size_t i_max) {
  require_alpha_r(alpha, r);
  if (p_max == 0 || i_max == 0) throw ParameterError("series orders must be positive");
  if (p_max + i_max > kStirlingCap) {
    throw StirlingCapExceeded("p_max + i_max must not exceed " + std::to_string(kStirlingCap));
  }
  const double s = std::sinh(r);
  SeriesResult result{s * s, 0.0};
  if (r == 0.0) return result;

  const double y = std::pow(4.0 * r / (2.0 * alpha), 2);  // (4x)^2 with x = r / 2alpha
  CompensatedSum outer;
  double prev_outer = 0.0;
  double last_outer = 0.0;
  double inner_remainder = 0.0;
  for (std::size_t p = 1; p <= p_max; ++p) {
    const double dp = static_cast<double>(p);
    const double prefactor = std::exp(2.0 * dp * std::log(2.0 * r) - log_factorial(2 * p));
    double h = 0.0;
    double denom = 1.0;
    double y_pow = 1.0;
    double prev_inner = 0.0;
    double last_inner = 0.0;
    for (std::size_t i = 1; i <= i_max; ++i) {
      const double di = static_cast<double>(i);
      denom *= (2.0 * dp + 2.0 * di - 1.0) * (2.0 * dp + 2.0 * di);
      y_pow *= y;
      prev_inner = last_inner;
      last_inner = stirling2(p + i, p) * y_pow / denom;
      h += last_inner;
    }
    if (i_max >= 2 && last_inner > 0.0 && last_inner >= prev_inner) {
      std::ostringstream msg;
      msg << "h_" << p << " terms stop decreasing at i=" << i_max << " (r/2alpha=" << r / (2.0 * alpha) << ")";
      throw DivergentSeries(msg.str());
    }
    inner_remainder += 0.5 * prefactor * last_inner;
    prev_outer = last_outer;
    last_outer = 0.5 * prefactor * h;
    outer.add(last_outer);
  }
  if (p_max >= 2 && last_outer > 0.0 && last_outer >= prev_outer) {
    std::ostringstream msg;
    msg << "outer series terms stop decreasing at p=" << p_max << " (r=" << r << ")";
    throw DivergentSeries(msg.str());
  }
  result.value += outer.value();
  result.remainder = last_outer + inner_remainder;
  return result;
}

double coherent_mean_photons_approx(double alpha, double r) {
  require_alpha_r(alpha, r);
  const double g = r * r / (2.0 * alpha * alpha);
  const double s = std::sinh(r);
  return std::exp(g) * s * s + 0.5 * std::expm1(g);
}

double quadrature_variance_approx(double alpha, double r, int sign) {
  require_alpha_r(alpha, r);
  require_sign(sign);
  return 0.25 * std::exp(2.0 * sign * r + r * r / (2.0 * alpha * alpha));
}

double b_squared_coherent(double alpha, double tau, double eps, BSquaredMode mode, EnsembleSource source,
                          const EnsembleOptions& opts) {
  require_tau(tau);
  const CoherentWindow w = confidence_window(alpha, eps);
  if (mode == BSquaredMode::TanhApprox) {
    CompensatedSum acc;
    for (std::size_t N = w.N_min; N <= w.N_max; ++N) {
      const double rN = 2.0 * std::sqrt(static_cast<double>(N)) * tau;
      const double s = std::sinh(rN);
      acc.add(w.weight(N) * std::tanh(rN) * (s * s + 1.0));
    }
    return acc.value() / w.mass();
  }
  return ensemble_sums(w, window_ensemble(w, tau, source, opts)).b_squared;
}

double quadrature_variance_exact(double alpha, double tau, double eps, int sign, EnsembleSource source,
                                 const EnsembleOptions& opts) {
  require_sign(sign);
  require_tau(tau);
  const CoherentWindow w = confidence_window(alpha, eps);
  const EnsembleSums s = ensemble_sums(w, window_ensemble(w, tau, source, opts));
  return 0.5 * (s.mean + sign * s.b_squared + 0.5);
}

double f_mean(double r) {
  if (!std::isfinite(r)) throw ParameterError("r must be finite");
  const double a = std::abs(r);
  if (a < 1e-4) {
    const double r2 = r * r;
    return -r2 / 6.0 - 11.0 * r2 * r2 / 45.0 - 11.0 * r2 * r2 * r2 / 315.0;
  }
  const double s = std::sinh(r);
  const double c = std::cosh(r);
  return 0.25 * (r * r * (2.0 + 1.0 / (s * s)) + 2.0 * r * c / s - 3.0 * s * s - 3.0);
}

double f_sq(double r) {
  if (!std::isfinite(r)) throw ParameterError("r must be finite");
  if (std::abs(r) < 1e-3) {
    const double r3 = r * r * r;
    return r3 / 6.0 + 0.3 * r3 * r * r;
  }
  const double s = std::sinh(r);
  const double c = std::cosh(r);
  const double s2 = s * s;
  return 0.5 * (r * r - 2.0 * r * (s2 + c * s + 1.0) + s2 * s2 + c * s2 * s + s2 + 2.0 * c * s);
}

double perturbative_mean(double alpha, double r) {
  require_alpha_r(alpha, r);
  const double s = std::sinh(r);
  return s * s * (1.0 + f_mean(r) / (alpha * alpha));
}

double perturbative_sq_variance(double alpha, double r) {
  require_alpha_r(alpha, r);
  return 0.25 * std::exp(-2.0 * r) * (1.0 + f_sq(r) / (alpha * alpha));
}

std::size_t default_density_cutoff(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("squeezing parameter must be finite and >= 0");
  constexpr std::size_t kLimit = 100000;
  CompensatedSum acc;
  for (std::size_t n = 0; n < kLimit; ++n) {
    const double a = squeezed_amplitude(n, r).value();
    acc.add(a * a);
    if (acc.value() >= 1.0 - 1e-12) return n;
  }
  return kLimit;
}

Eigen::MatrixXd signal_density_matrix(double alpha, double tau, double eps, std::size_t n_max, EnsembleSource source,
                                      const EnsembleOptions& opts) {
  require_tau(tau);
  const CoherentWindow w = confidence_window(alpha, eps);
  const auto ens = ensemble_amplitudes(w.N_min, w.N_max, tau, source, opts);
  const std::size_t M_lo = w.N_min > n_max ? w.N_min - n_max : 0;
  const std::size_t rows = w.N_max - M_lo + 1;
  const auto cols = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), cols);
  for (std::size_t N = w.N_min; N <= w.N_max; ++N) {
    const auto& a = ens.at(N);
    const double sp = std::sqrt(w.weight(N));
    for (std::size_t n = 0; n <= n_max && n < a.size() && n <= N; ++n) {
      C(static_cast<Eigen::Index>(N - n - M_lo), static_cast<Eigen::Index>(n)) = sp * a[n];
    }
  }
  return C.transpose() * C;
}

const char* to_string(ObservableMethod m) {
  switch (m) {
    case ObservableMethod::ExactNumeric: return "ExactNumeric";
    case ObservableMethod::IsoenergeticFormula: return "IsoenergeticFormula";
    case ObservableMethod::IsoenergeticDirect: return "IsoenergeticDirect";
    case ObservableMethod::ParametricZeroth: return "ParametricZeroth";
    case ObservableMethod::PerturbativeSecond: return "PerturbativeSecond";
  }
  return "unknown";
}

std::optional<ObservableMethod> parse_method(const std::string& name) {
  for (auto m : {ObservableMethod::ExactNumeric, ObservableMethod::IsoenergeticFormula,
                 ObservableMethod::IsoenergeticDirect, ObservableMethod::ParametricZeroth,
                 ObservableMethod::PerturbativeSecond}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

ObservableReport observable_report(double alpha, double r, double eps, ObservableMethod method,
                                   const EnsembleOptions& opts) {
  require_alpha_r(alpha, r);
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  ObservableReport rep;
  rep.method = method;
  rep.alpha = alpha;
  rep.r = r;
  rep.eps = eps;
  const auto finish = [&rep] {
    if (rep.var_x_plus) rep.uncertainty_product = *rep.var_x_plus * rep.var_x_minus;
    return rep;
  };

  switch (method) {
    case ObservableMethod::ParametricZeroth: {
      const double s = std::sinh(r);
      rep.mean_pairs_photons = s * s;
      rep.var_x_minus = 0.25 * std::exp(-2.0 * r);
      rep.var_x_plus = 0.25 * std::exp(2.0 * r);
      rep.b_squared = s * std::cosh(r);
      return finish();
    }
    case ObservableMethod::IsoenergeticFormula:
      rep.mean_pairs_photons = coherent_mean_photons_approx(alpha, r);
      rep.var_x_minus = quadrature_variance_approx(alpha, r, -1);
      rep.var_x_plus = quadrature_variance_approx(alpha, r, +1);
      rep.b_squared = *rep.var_x_plus - rep.var_x_minus;
      return finish();
    case ObservableMethod::PerturbativeSecond:
      rep.mean_pairs_photons = perturbative_mean(alpha, r);
      rep.var_x_minus = perturbative_sq_variance(alpha, r);
      return finish();
    case ObservableMethod::ExactNumeric:
      if (alpha > kExactNumericAlphaCap) {
        std::ostringstream msg;
        msg << "ExactNumeric integrates every subspace of the window and is limited to alpha <= "
            << kExactNumericAlphaCap << " (got " << alpha << ")";
        throw RuntimeGuardExceeded(msg.str());
      }
      [[fallthrough]];
    case ObservableMethod::IsoenergeticDirect: {
      const auto source =
          method == ObservableMethod::ExactNumeric ? EnsembleSource::Numeric : EnsembleSource::Isoenergetic;
      const double tau = r / (2.0 * alpha);
      const CoherentWindow w = confidence_window(alpha, eps);
      const auto ens = window_ensemble(w, tau, source, opts);
      const EnsembleSums s = ensemble_sums(w, ens);
      rep.mean_pairs_photons = s.mean;
      rep.b_squared = s.b_squared;
      rep.var_x_minus = 0.5 * (s.mean - s.b_squared + 0.5);
      rep.var_x_plus = 0.5 * (s.mean + s.b_squared + 0.5);
      rep.window_mass = s.mass;
      JointState joint;
      for (std::size_t N = w.N_min; N <= w.N_max; ++N) {
        const auto& a = ens.at(N);
        const double sp = std::sqrt(w.weight(N));
        for (std::size_t n = 0; n < a.size() && n <= N; ++n) joint.add(N - n, 2 * n, sp * a[n]);
      }
      rep.odd_moment_max = odd_moment_check(joint).max_abs();
      return finish();
    }
  }
  throw ParameterError("unknown observable method");
}

}  // namespace isosqueeze
