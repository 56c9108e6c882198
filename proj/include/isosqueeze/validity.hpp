#pragma once

// Error-specific indicator functions V(r, alpha, eps); V < 1 means the
// corresponding approximation is within relative error eps. Everything is
// computed as ln V because (1 - sech^2 r)^{sqrt(eps) alpha} has exponents up
// to ~1e5 on bases within 1e-5 of one.

#include <optional>
#include <string>
#include <vector>

namespace isosqueeze {

enum class Indicator { Mean, Sq, HZ, V1, V2, IE, P };

[[nodiscard]] const char* to_string(Indicator ind);
[[nodiscard]] std::optional<Indicator> parse_indicator(const std::string& name);

struct ValidityQuery {
  double r = 0.0;
  double alpha = 1.0;
  double eps = 0.1;

  /// Positivity and eps in (0, 1). Regime checks are per indicator.
  void validate() const;
};

// Perturbative corrections relative to eps: nu^2 |f| / eps.
[[nodiscard]] double log_v_mean(const ValidityQuery& q);
[[nodiscard]] double log_v_sq(const ValidityQuery& q);
/// max(2, r) e^{2r} / (2 alpha eps).
[[nodiscard]] double log_v_hz(const ValidityQuery& q);
/// (1 - p0^2)^{sqrt(eps) alpha} / (p0 sqrt(pi alpha) eps^{5/4}), p0 = sech r.
/// Requires eps alpha^2 >= 1.
[[nodiscard]] double log_v1(const ValidityQuery& q);
/// 2 sqrt(alpha) / (sqrt(pi) eps^{3/4}) p0 (1 - p0^2)^{sqrt(eps) alpha - 1}.
[[nodiscard]] double log_v2(const ValidityQuery& q);
/// max(V1, V2).
[[nodiscard]] double log_v_ie(const ValidityQuery& q);
/// V_IE at eps^2; requires eps^2 alpha^2 >= 1.
[[nodiscard]] double log_v_p(const ValidityQuery& q);

[[nodiscard]] double log_indicator(Indicator ind, const ValidityQuery& q);

/// exp(ln V) when |ln V| < 700, else nullopt (and 0 for ln V = -inf).
[[nodiscard]] std::optional<double> exp_if_representable(double log_v);

[[nodiscard]] double v_mean(const ValidityQuery& q);
[[nodiscard]] double v_sq(const ValidityQuery& q);
[[nodiscard]] double v_hz(const ValidityQuery& q);
[[nodiscard]] double v1(const ValidityQuery& q);
[[nodiscard]] double v2(const ValidityQuery& q);
[[nodiscard]] double v_ie(const ValidityQuery& q);
[[nodiscard]] double v_p(const ValidityQuery& q);

struct IndicatorValue {
  double log_value = 0.0;
  std::optional<double> value;
  bool valid = false;  ///< V < 1
};

struct ValidityReport {
  ValidityQuery query;
  IndicatorValue v_mean, v_sq, v_hz, v1, v2, v_ie;
  std::optional<IndicatorValue> v_p;  ///< absent when eps^2 alpha^2 < 1
};

/// Throws AsymptoticRegimeViolation when eps alpha^2 < 1.
[[nodiscard]] ValidityReport validity_report(const ValidityQuery& q);

struct Crossing {
  double at = 0.0;
  bool upward = false;  ///< ln V goes from < 0 to >= 0 with increasing argument
};

struct BoundaryResult {
  std::vector<Crossing> crossings;
  std::size_t canonical = 0;  ///< index into crossings
  [[nodiscard]] double value() const { return crossings.at(canonical).at; }
};

/// Scan [r_min, r_max] at step 0.05, then bisect each sign change of ln V to
/// |dr| <= 1e-3. Canonical crossing: the smallest r. Throws NoCrossing.
[[nodiscard]] BoundaryResult boundary_r(double alpha, double eps, Indicator ind, double r_min, double r_max);

/// Same in ln alpha (200 log-spaced scan points, bisection to relative 1e-6).
/// The lower end is raised to the indicator's regime floor. Canonical
/// crossing: the largest alpha, above which V < 1 up to alpha_max.
[[nodiscard]] BoundaryResult boundary_alpha(double r, double eps, Indicator ind, double alpha_min, double alpha_max);

struct PhysicalConstants {
  double hbar = 1.054571817e-34;    // J s
  double c = 2.99792458e8;          // m / s
  const char* version = "codata2018-v1";
};

inline constexpr PhysicalConstants kConstants{};

enum class ExperimentDecision { ParametricOK, IsoenergeticOK, Neither };

[[nodiscard]] const char* to_string(ExperimentDecision d);

struct ExperimentVerdict {
  double alpha = 0.0;
  double r = 0.0;
  double pump_photons = 0.0;
  double signal_photons = 0.0;
  ValidityReport report;
  ExperimentDecision decision = ExperimentDecision::Neither;
};

/// alpha^2 = U_p / (hbar w_p), sinh^2 r = U_s / (hbar w_p / 2), w_p = 2 pi c / lambda.
[[nodiscard]] ExperimentVerdict experiment_verdict(double pump_energy, double pump_wavelength, double signal_energy,
                                                   double eps);

}  // namespace isosqueeze
