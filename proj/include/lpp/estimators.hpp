#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lpp/distributions.hpp"
#include "lpp/field.hpp"

namespace lpp {

// ---------------------------------------------------------------------------
// Sampling methods

struct DirectMethod {
  friend bool operator==(const DirectMethod&, const DirectMethod&) = default;
};

/// Importance sampling: sites near a planted corridor are drawn from the
/// lambda-tilted law and each replicate is reweighted by its likelihood ratio.
/// Unset fields take estimator-specific defaults.
struct TiltedMethod {
  std::optional<double> lambda;
  std::optional<int> halfwidth;
  std::optional<int> spacing;
  friend bool operator==(const TiltedMethod&, const TiltedMethod&) = default;
};

using SamplingMethod = std::variant<DirectMethod, TiltedMethod>;

/// The method a RateEstimate was produced with, defaults resolved.
struct MethodRecord {
  bool tilted = false;
  double lambda = 0.0;
  int corridor_halfwidth = 0;

  /// "direct" or "tilted(lambda=..;halfwidth=..)".
  std::string describe() const;
};

struct RunOptions {
  unsigned workers = 0;          // 0: hardware concurrency
  std::optional<double> mu0;     // overrides the closed-form diagonal shape constant
};

// ---------------------------------------------------------------------------
// Results

struct EventEstimate {
  double hits = 0.0;     // count, or sum of likelihood ratios when tilted
  double p_hat = 0.0;
  double std_err = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

/// Estimate of a tail probability p at scale n together with the finite-n
/// bound -log(p_hat)/n on the rate.
struct RateEstimate {
  double t = 0.0;
  double r = 0.0;
  int n = 0;
  std::uint64_t n_samples = 0;
  double hits = 0.0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double std_err = 0.0;
  double fekete_bound = 0.0;  // +inf when there were no hits
  MethodRecord method;
  /// Point event recorded alongside the tail (e.g. Mid·e1 equal to the threshold).
  std::optional<EventEstimate> point_event;

  bool zero_hits() const noexcept { return !(hits > 0.0); }
  /// Delta-method standard error of fekete_bound.
  double fekete_std_err() const noexcept;
};

struct ShapeEstimate {
  double t = 0.0;
  int n = 0;
  std::uint64_t n_samples = 0;
  double mean = 0.0;      // of G / n
  double std_err = 0.0;
};

// ---------------------------------------------------------------------------
// Planted corridor

/// Waypoints along the two straight legs (0,0) -> apex -> (n,n), where
/// apex = direction_target(t + offset, n). Sites within l-infinity distance
/// `halfwidth` of the waypoint polyline form the tilted region. With spacing 1
/// the waypoints themselves are an up-right lattice path.
class Corridor {
 public:
  static Corridor make(double t, int n, int halfwidth, int spacing = 1, double offset = 0.0);

  double t() const noexcept { return t_; }
  int n() const noexcept { return n_; }
  int halfwidth() const noexcept { return halfwidth_; }
  int spacing() const noexcept { return spacing_; }
  double offset() const noexcept { return offset_; }
  const std::vector<LatticePoint>& waypoints() const noexcept { return waypoints_; }
  std::size_t apex_index() const noexcept { return apex_index_; }
  LatticePoint apex() const { return waypoints_.at(apex_index_); }

  /// Whether site p is within the corridor.
  bool covers(LatticePoint p) const noexcept;

  /// Row-major membership mask over the rectangle [0, width] x [0, height].
  std::vector<unsigned char> mask(int width, int height) const;

 private:
  double t_ = 0.0;
  int n_ = 0;
  int halfwidth_ = 0;
  int spacing_ = 1;
  double offset_ = 0.0;
  std::size_t apex_index_ = 0;
  std::vector<LatticePoint> waypoints_;
};

/// ceil(n^(2/3)), the transversal-fluctuation scale.
int default_halfwidth(int n);

// ---------------------------------------------------------------------------
// Estimators. All are deterministic functions of (arguments, seed): replicate i
// sees the field with seed derive_seed(seed, i), so runs at different t, n or
// thresholds with the same seed are paired replicate by replicate.

/// P(G(0, target(t, n)) >= r n) by plain Monte Carlo with a Wilson interval.
RateEstimate estimate_tail(const WeightDistribution& dist, double t, double r, int n,
                           std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opts = {});

/// Same probability under the lambda-tilted corridor measure.
RateEstimate estimate_tail_tilted(const WeightDistribution& dist, double t, double r, int n,
                                  std::uint64_t n_samples, double lambda, const Corridor& corridor,
                                  std::uint64_t seed, const RunOptions& opts = {});

/// Dispatches on `method`; a tilted method without lambda tilts to mean r per
/// step, without halfwidth uses default_halfwidth(n).
RateEstimate estimate_tail(const WeightDistribution& dist, double t, double r, int n,
                           std::uint64_t n_samples, std::uint64_t seed,
                           const SamplingMethod& method, const RunOptions& opts = {});

/// P(Mid·e1 >= floor(n/2 + t n)) for the geodesic (0,0) -> (n,n); the point event
/// records Mid·e1 == floor(n/2 + t n). Tilted default lambda solves cgf' = mu_0.
RateEstimate estimate_midpoint_tail(const WeightDistribution& dist, double t, int n,
                                    std::uint64_t n_samples, std::uint64_t seed,
                                    const SamplingMethod& method = DirectMethod{},
                                    const RunOptions& opts = {});

/// As estimate_midpoint_tail for the point-to-line argmax End on x + y = n.
RateEstimate estimate_endpoint_tail(const WeightDistribution& dist, double t, int n,
                                    std::uint64_t n_samples, std::uint64_t seed,
                                    const SamplingMethod& method = DirectMethod{},
                                    const RunOptions& opts = {});

/// Mean of G(0, target(t, n)) / n with its standard error.
ShapeEstimate estimate_shape(const WeightDistribution& dist, double t, int n,
                             std::uint64_t n_samples, std::uint64_t seed,
                             const RunOptions& opts = {});

/// One tail estimate per n; each fekete_bound upper-bounds the limiting rate.
/// `n_list` must be ascending.
std::vector<RateEstimate> fekete_curve(const WeightDistribution& dist, double t, double r,
                                       const std::vector<int>& n_list,
                                       std::uint64_t per_n_samples, std::uint64_t seed,
                                       const SamplingMethod& method = DirectMethod{},
                                       const RunOptions& opts = {});

struct MonotoneReport {
  std::vector<RateEstimate> estimates;
  std::vector<std::size_t> zero_hit;  // indices excluded from comparisons
  std::vector<std::size_t> violations;  // i: estimate i exceeds its successor by > 2 SE
  bool pass = true;
};

/// Compares consecutive estimates: no adjacent (non-zero-hit) pair may
/// decrease by more than two combined standard errors.
MonotoneReport check_monotone(std::vector<RateEstimate> estimates);

/// Tail rate bounds across ascending t in [0, 1/2], assessed by check_monotone.
MonotoneReport verify_monotone_in_t(const WeightDistribution& dist, double r, int n,
                                    const std::vector<double>& t_list,
                                    std::uint64_t per_t_samples, std::uint64_t seed,
                                    const SamplingMethod& method = DirectMethod{},
                                    const RunOptions& opts = {});

/// P(G(0, (n/2, n/2)) <= (mu0 - eps) n) under a down-tilt of every site
/// (lambda < 0; default solves cgf' = mean * (mu0 - eps) / mu0); r holds mu0 - eps.
RateEstimate estimate_left_tail(const WeightDistribution& dist, double eps, int n,
                                std::uint64_t n_samples, std::uint64_t seed,
                                std::optional<double> lambda = std::nullopt,
                                const RunOptions& opts = {});

/// True when there are at least two estimates, none zero-hit, and
/// -log(p_hat)/n increases by more than the combined standard error at every step.
bool is_superexponential(const std::vector<RateEstimate>& estimates);

struct LeftTailReport {
  double mu0 = 0.0;
  double eps = 0.0;
  std::vector<RateEstimate> estimates;  // r holds the level mu0 - eps
  bool superexponential = false;
};

/// estimate_left_tail per n, paired by seed, with the is_superexponential flag.
LeftTailReport left_tail_scan(const WeightDistribution& dist, double eps,
                              const std::vector<int>& n_list, std::uint64_t per_n_samples,
                              std::uint64_t seed, std::optional<double> lambda = std::nullopt,
                              const RunOptions& opts = {});

struct IdentityReport {
  double t = 0.0;
  int n = 0;
  double mu0 = 0.0;
  RateEstimate midpoint;  // P(Mid·e1 >= floor(n/2 + t n))
  RateEstimate passage;   // P(G(0, target(t, n)) >= mu0 n)
  double a = 0.0;         // -log(midpoint.p_hat) / (2n)
  double a_std_err = 0.0;
  double b = 0.0;         // passage.fekete_bound
  double b_std_err = 0.0;
  double relative_gap = 0.0;  // |a - b| / max(a, b)
  std::optional<double> closed_form_per_factor;  // cramer_rate(mu0) when t = 1/2
};

/// Compares the midpoint-tail exponent (halved) with the passage-value tail
/// exponent at level mu0, each from `budget` replicates.
IdentityReport midpoint_rate_identity(const WeightDistribution& dist, double t, int n,
                                      std::uint64_t budget, std::uint64_t seed,
                                      const SamplingMethod& midpoint_method = TiltedMethod{},
                                      const SamplingMethod& passage_method = TiltedMethod{},
                                      const RunOptions& opts = {});

}  // namespace lpp
