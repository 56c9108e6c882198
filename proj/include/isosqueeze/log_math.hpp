#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace isosqueeze {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A real number stored as sign and natural log of its magnitude.
/// Zero is sign 0 with log_abs = -inf.
struct LogAmplitude {
  int sign = 0;
  double log_abs = kNegInf;

  [[nodiscard]] double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  [[nodiscard]] static LogAmplitude zero() { return {}; }
  [[nodiscard]] static LogAmplitude from_log(double log_abs) {
    return std::isinf(log_abs) && log_abs < 0 ? LogAmplitude{} : LogAmplitude{1, log_abs};
  }
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Hyperbolic functions in log form, accurate for large r where tanh r is
// within rounding of 1.
[[nodiscard]] double log_cosh(double r);
[[nodiscard]] double log_sech(double r);
[[nodiscard]] double log_tanh(double r);
/// ln(1 - sech^2 r) = 2 ln tanh r.
[[nodiscard]] double log_tanh_squared(double r);
/// sech^2 r without cancellation.
[[nodiscard]] double sech_squared(double r);

/// ln C(2n, n).
[[nodiscard]] double log_central_binomial(std::size_t n);
/// ln C(N, n), n <= N.
[[nodiscard]] double log_binomial(std::size_t N, std::size_t n);
/// ln (N)_n = ln N!/(N-n)!, n <= N.
[[nodiscard]] double log_falling_factorial(std::size_t N, std::size_t n);
[[nodiscard]] double log_factorial(std::size_t n);

/// ln sum exp(x_i); -inf for an empty or all -inf input.
[[nodiscard]] double log_sum_exp(std::span<const double> xs);

/// exp(x) that flushes to zero instead of producing subnormals.
[[nodiscard]] inline double exp_or_zero(double x) { return x < -708.0 ? 0.0 : std::exp(x); }

}  // namespace isosqueeze
