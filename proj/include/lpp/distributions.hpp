#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lpp/rng.hpp"

namespace lpp {

struct ExponentialLaw {
  double rate = 1.0;
  friend bool operator==(const ExponentialLaw&, const ExponentialLaw&) = default;
};

struct GammaLaw {
  double shape = 1.0;
  double rate = 1.0;
  friend bool operator==(const GammaLaw&, const GammaLaw&) = default;
};

/// Which of the standing weight assumptions a law satisfies: an exponential
/// moment, a continuous CDF, unbounded support, non-negativity.
struct AssumptionReport {
  bool has_exponential_moment = false;
  bool is_continuous = false;
  bool is_unbounded = false;
  bool is_nonnegative = false;

  bool all() const noexcept {
    return has_exponential_moment && is_continuous && is_unbounded && is_nonnegative;
  }
};

/// A site-weight law with its cumulant generating function.
///
/// Only laws meeting every assumption are constructible. `cgf_domain_sup()` is
/// the sharp exponential-moment witness: E exp(lambda * w) < inf exactly for
/// lambda < cgf_domain_sup().
class WeightDistribution {
 public:
  using Kind = std::variant<ExponentialLaw, GammaLaw>;

  static WeightDistribution exponential(double rate);
  static WeightDistribution gamma(double shape, double rate);

  /// Parses "exp:<rate>" or "gamma:<shape>,<rate>" (also "exponential:", "gamma:").
  static WeightDistribution parse(std::string_view descriptor);

  const Kind& kind() const noexcept { return kind_; }
  bool is_exponential() const noexcept { return std::holds_alternative<ExponentialLaw>(kind_); }
  double rate() const noexcept;

  double mean() const noexcept;
  double variance() const noexcept;
  double cgf_domain_sup() const noexcept;

  /// log E exp(lambda * w); throws DomainError for lambda >= cgf_domain_sup().
  double cgf(double lambda) const;
  double cgf_derivative(double lambda) const;
  double cgf_second_derivative(double lambda) const;

  /// Exponentially tilted law: density multiplied by exp(lambda * w - cgf(lambda)).
  /// Both families are closed under tilting (rate -> rate - lambda).
  WeightDistribution tilted(double lambda) const;

  AssumptionReport assumptions() const noexcept;

  /// Canonical descriptor accepted by parse(), e.g. "exp:1" or "gamma:2,1".
  std::string descriptor() const;

  friend bool operator==(const WeightDistribution&, const WeightDistribution&) = default;

 private:
  explicit WeightDistribution(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Inverse CDF of Exponential{rate}: -log(1 - u) / rate.
double exponential_inverse_cdf(double u, double rate) noexcept;

/// One draw from `dist` using the site's stream. Exponential uses one uniform
/// via the inverse CDF; Gamma uses Marsaglia-Tsang rejection, so the number of
/// uniforms consumed varies but the result is a pure function of the stream.
double sample(const WeightDistribution& dist, SiteStream& stream);

inline double cgf(const WeightDistribution& dist, double lambda) { return dist.cgf(lambda); }

/// Solves cgf'(lambda) = x for lambda in (-inf, lambda_max). Negative x below the
/// mean gives a negative (down) tilt. Throws DomainError for x <= 0.
double solve_tilt(const WeightDistribution& dist, double x);

/// Cramer rate sup_{lambda >= 0} (lambda * x - cgf(lambda)) of the i.i.d. sum.
/// Zero for x <= mean; DomainError for x <= 0.
double cramer_rate(const WeightDistribution& dist, double x);

/// 2 * cramer_rate(dist, 2): the corner-path rate 2 - 2 log 2, defined only for
/// Exponential{1}. Throws UnsupportedLawError otherwise.
double corner_rate_theoretical(const WeightDistribution& dist);

/// Diagonal shape constant mu_0 where it is known in closed form
/// (Exponential{rate}: 2 / rate). Empty for other laws.
std::optional<double> diagonal_shape_constant(const WeightDistribution& dist) noexcept;

}  // namespace lpp
