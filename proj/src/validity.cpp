#include "isosqueeze/validity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/log_math.hpp"
#include "isosqueeze/observables.hpp"

namespace isosqueeze {

const char* to_string(Indicator ind) {
  switch (ind) {
    case Indicator::Mean: return "v_mean";
    case Indicator::Sq: return "v_sq";
    case Indicator::HZ: return "v_hz";
    case Indicator::V1: return "v1";
    case Indicator::V2: return "v2";
    case Indicator::IE: return "v_ie";
    case Indicator::P: return "v_p";
  }
  return "unknown";
}

std::optional<Indicator> parse_indicator(const std::string& name) {
  for (auto ind : {Indicator::Mean, Indicator::Sq, Indicator::HZ, Indicator::V1, Indicator::V2, Indicator::IE,
                   Indicator::P}) {
    if (name == to_string(ind)) return ind;
  }
  return std::nullopt;
}

void ValidityQuery::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("r must be finite and >= 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
}

namespace {

void require_regime(double eps, double alpha, const char* what) {
  if (eps * alpha * alpha < 1.0) {
    std::ostringstream msg;
    msg << what << ": eps * alpha^2 = " << eps * alpha * alpha
        << " < 1, so the cutoff sqrt(eps) alpha is below one pair and the indicator is outside its asymptotic regime";
    throw AsymptoticRegimeViolation(msg.str());
  }
}

// x * ln_base with 0 * (-inf) = 0.
double power_term(double x, double ln_base) { return x == 0.0 ? 0.0 : x * ln_base; }

double log_v1_raw(double r, double alpha, double eps) {
  return power_term(std::sqrt(eps) * alpha, log_tanh_squared(r)) - log_sech(r) -
         0.5 * std::log(std::numbers::pi * alpha) - 1.25 * std::log(eps);
}

double log_v2_raw(double r, double alpha, double eps) {
  return std::log(2.0 * std::sqrt(alpha / std::numbers::pi)) - 0.75 * std::log(eps) + log_sech(r) +
         power_term(std::sqrt(eps) * alpha - 1.0, log_tanh_squared(r));
}

double log_v_ie_raw(double r, double alpha, double eps) {
  return std::max(log_v1_raw(r, alpha, eps), log_v2_raw(r, alpha, eps));
}

double regime_floor(Indicator ind, double eps) {
  switch (ind) {
    case Indicator::V1:
    case Indicator::V2:
    case Indicator::IE: return 1.0 / std::sqrt(eps);
    case Indicator::P: return 1.0 / eps;
    default: return 0.0;
  }
}

}  // namespace

double log_v_mean(const ValidityQuery& q) {
  q.validate();
  return std::log(std::abs(f_mean(q.r))) - 2.0 * std::log(q.alpha) - std::log(q.eps);
}

double log_v_sq(const ValidityQuery& q) {
  q.validate();
  return std::log(std::abs(f_sq(q.r))) - 2.0 * std::log(q.alpha) - std::log(q.eps);
}

double log_v_hz(const ValidityQuery& q) {
  q.validate();
  return std::log(std::max(2.0, q.r)) + 2.0 * q.r - std::log(2.0 * q.alpha * q.eps);
}

double log_v1(const ValidityQuery& q) {
  q.validate();
  require_regime(q.eps, q.alpha, "V1");
  return log_v1_raw(q.r, q.alpha, q.eps);
}

double log_v2(const ValidityQuery& q) {
  q.validate();
  require_regime(q.eps, q.alpha, "V2");
  return log_v2_raw(q.r, q.alpha, q.eps);
}

double log_v_ie(const ValidityQuery& q) {
  q.validate();
  require_regime(q.eps, q.alpha, "V_IE");
  return log_v_ie_raw(q.r, q.alpha, q.eps);
}

double log_v_p(const ValidityQuery& q) {
  q.validate();
  const double e2 = q.eps * q.eps;
  require_regime(e2, q.alpha, "V_P (eps^2)");
  return log_v_ie_raw(q.r, q.alpha, e2);
}

double log_indicator(Indicator ind, const ValidityQuery& q) {
  switch (ind) {
    case Indicator::Mean: return log_v_mean(q);
    case Indicator::Sq: return log_v_sq(q);
    case Indicator::HZ: return log_v_hz(q);
    case Indicator::V1: return log_v1(q);
    case Indicator::V2: return log_v2(q);
    case Indicator::IE: return log_v_ie(q);
    case Indicator::P: return log_v_p(q);
  }
  throw ParameterError("unknown indicator");
}

std::optional<double> exp_if_representable(double log_v) {
  if (std::isinf(log_v) && log_v < 0.0) return 0.0;
  if (std::abs(log_v) < 700.0) return std::exp(log_v);
  return std::nullopt;
}

double v_mean(const ValidityQuery& q) { return std::exp(log_v_mean(q)); }
double v_sq(const ValidityQuery& q) { return std::exp(log_v_sq(q)); }
double v_hz(const ValidityQuery& q) { return std::exp(log_v_hz(q)); }
double v1(const ValidityQuery& q) { return std::exp(log_v1(q)); }
double v2(const ValidityQuery& q) { return std::exp(log_v2(q)); }
double v_ie(const ValidityQuery& q) { return std::exp(log_v_ie(q)); }
double v_p(const ValidityQuery& q) { return std::exp(log_v_p(q)); }

namespace {

IndicatorValue make_value(double log_v) { return {log_v, exp_if_representable(log_v), log_v < 0.0}; }

}  // namespace

ValidityReport validity_report(const ValidityQuery& q) {
  q.validate();
  require_regime(q.eps, q.alpha, "validity report");
  ValidityReport rep;
  rep.query = q;
  rep.v_mean = make_value(log_v_mean(q));
  rep.v_sq = make_value(log_v_sq(q));
  rep.v_hz = make_value(log_v_hz(q));
  rep.v1 = make_value(log_v1(q));
  rep.v2 = make_value(log_v2(q));
  rep.v_ie = make_value(log_v_ie(q));
  if (q.eps * q.eps * q.alpha * q.alpha >= 1.0) rep.v_p = make_value(log_v_p(q));
  return rep;
}

namespace {

// Sign changes of f on the ordered grid xs, each refined by bisection until
// the bracket is narrower than tol(x).
std::vector<Crossing> find_crossings(const std::vector<double>& xs, const std::function<double(double)>& f,
                                     const std::function<bool(double, double)>& narrow_enough) {
  std::vector<Crossing> out;
  auto above = [](double v) { return v >= 0.0; };
  double prev_x = xs.front();
  double prev_v = f(prev_x);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x = xs[i];
    const double v = f(x);
    if (above(v) != above(prev_v)) {
      double lo = prev_x;
      double hi = x;
      const bool lo_above = above(prev_v);
      while (!narrow_enough(lo, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (above(f(mid)) == lo_above) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back({0.5 * (lo + hi), !lo_above});
    }
    prev_x = x;
    prev_v = v;
  }
  return out;
}

}  // namespace

BoundaryResult boundary_r(double alpha, double eps, Indicator ind, double r_min, double r_max) {
  if (!(r_min >= 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw ParameterError("r range must satisfy 0 <= r_min < r_max < inf");
  }
  ValidityQuery base{r_min, alpha, eps};
  base.validate();
  // Surface regime violations before scanning.
  (void)log_indicator(ind, base);

  constexpr double kStep = 0.05;
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((r_max - r_min) / kStep + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) grid.push_back(r_min + kStep * static_cast<double>(k));
  if (grid.back() < r_max) grid.push_back(r_max);

  const auto f = [&](double r) { return log_indicator(ind, ValidityQuery{r, alpha, eps}); };
  BoundaryResult res;
  res.crossings = find_crossings(grid, f, [](double lo, double hi) { return hi - lo <= 2.5e-4; });
  if (res.crossings.empty()) {
    std::ostringstream msg;
    msg << to_string(ind) << " does not cross 1 for r in [" << r_min << ", " << r_max << "] at alpha=" << alpha
        << ", eps=" << eps;
    throw NoCrossing(msg.str());
  }
  res.canonical = 0;
  return res;
}

BoundaryResult boundary_alpha(double r, double eps, Indicator ind, double alpha_min, double alpha_max) {
  if (!(alpha_min > 0.0) || !(alpha_max > alpha_min) || !std::isfinite(alpha_max)) {
    throw ParameterError("alpha range must satisfy 0 < alpha_min < alpha_max < inf");
  }
  ValidityQuery base{r, alpha_max, eps};
  base.validate();
  const double lo_alpha = std::max(alpha_min, regime_floor(ind, eps) * (1.0 + 1e-12));
  if (!(lo_alpha < alpha_max)) {
    throw AsymptoticRegimeViolation("alpha range lies entirely below the indicator's regime floor");
  }

  constexpr std::size_t kPoints = 200;
  const double a = std::log(lo_alpha);
  const double b = std::log(alpha_max);
  std::vector<double> grid(kPoints);
  for (std::size_t k = 0; k < kPoints; ++k) grid[k] = a + (b - a) * static_cast<double>(k) / (kPoints - 1);

  const auto f = [&](double la) { return log_indicator(ind, ValidityQuery{r, std::exp(la), eps}); };
  BoundaryResult res;
  res.crossings = find_crossings(grid, f, [](double lo, double hi) { return hi - lo <= 1e-6; });
  if (res.crossings.empty()) {
    std::ostringstream msg;
    msg << to_string(ind) << " does not cross 1 for alpha in [" << lo_alpha << ", " << alpha_max << "] at r=" << r
        << ", eps=" << eps;
    throw NoCrossing(msg.str());
  }
  for (auto& c : res.crossings) c.at = std::exp(c.at);
  res.canonical = res.crossings.size() - 1;
  return res;
}

const char* to_string(ExperimentDecision d) {
  switch (d) {
    case ExperimentDecision::ParametricOK: return "parametric-OK";
    case ExperimentDecision::IsoenergeticOK: return "isoenergetic-OK";
    case ExperimentDecision::Neither: return "neither";
  }
  return "unknown";
}

ExperimentVerdict experiment_verdict(double pump_energy, double pump_wavelength, double signal_energy, double eps) {
  if (!(pump_energy > 0.0) || !std::isfinite(pump_energy)) throw ParameterError("pump energy must be positive");
  if (!(pump_wavelength > 0.0) || !std::isfinite(pump_wavelength)) {
    throw ParameterError("pump wavelength must be positive");
  }
  if (!(signal_energy >= 0.0) || !std::isfinite(signal_energy)) {
    throw ParameterError("signal energy must be finite and >= 0");
  }
  const double omega_p = 2.0 * std::numbers::pi * kConstants.c / pump_wavelength;
  const double quantum_p = kConstants.hbar * omega_p;
  ExperimentVerdict v;
  v.pump_photons = pump_energy / quantum_p;
  v.signal_photons = signal_energy / (0.5 * quantum_p);
  v.alpha = std::sqrt(v.pump_photons);
  v.r = std::asinh(std::sqrt(v.signal_photons));
  v.report = validity_report(ValidityQuery{v.r, v.alpha, eps});
  if (v.report.v_p && v.report.v_p->valid) {
    v.decision = ExperimentDecision::ParametricOK;
  } else if (v.report.v_ie.valid) {
    v.decision = ExperimentDecision::IsoenergeticOK;
  } else {
    v.decision = ExperimentDecision::Neither;
  }
  return v;
}

}  // namespace isosqueeze
