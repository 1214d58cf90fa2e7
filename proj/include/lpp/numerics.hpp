#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>

namespace lpp {

/// Neumaier (improved Kahan-Babuska) compensated sum.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const NeumaierSum& other) noexcept {
    add(other.sum_);
    add(other.compensation_);
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Sum of exp(a_i) kept as max + log of a compensated, rescaled sum, so terms
/// far below DBL_MIN still contribute.
class LogSumExp {
 public:
  void add_log(double a) noexcept {
    if (a == -std::numeric_limits<double>::infinity()) return;
    if (a > max_) {
      rescale(a);
    }
    scaled_.add(std::exp(a - max_));
  }
  void merge(const LogSumExp& other) noexcept {
    if (other.max_ == -std::numeric_limits<double>::infinity()) return;
    if (other.max_ > max_) rescale(other.max_);
    // Terms of `other` are relative to other.max_ <= max_.
    const double factor = std::exp(other.max_ - max_);
    NeumaierSum shifted;
    shifted.add(other.scaled_.value() * factor);
    scaled_.merge(shifted);
  }
  /// log of the sum; -inf when empty.
  double log_value() const noexcept {
    const double s = scaled_.value();
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(s);
  }
  double value() const noexcept { return std::exp(log_value()); }

 private:
  void rescale(double new_max) noexcept {
    if (max_ != -std::numeric_limits<double>::infinity()) {
      const double factor = std::exp(max_ - new_max);
      NeumaierSum next;
      next.add(scaled_.value() * factor);
      scaled_ = next;
    }
    max_ = new_max;
  }

  double max_ = -std::numeric_limits<double>::infinity();
  NeumaierSum scaled_;
};

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `hits` successes out of `trials`.
inline Interval wilson_interval(double hits, double trials, double z = kZ95) noexcept {
  if (trials <= 0.0) return {0.0, 1.0};
  const double p = hits / trials;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double centre = (p + z2 / (2.0 * trials)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
  return {hits > 0.0 ? std::max(0.0, centre - half) : 0.0,
          hits < trials ? std::min(1.0, centre + half) : 1.0};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_err = 0.0;  // NaN with fewer than three points
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct x values.
std::optional<LinearFit> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lpp
