#include "lpp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lpp/error.hpp"
#include "lpp/numerics.hpp"
#include "lpp/parallel.hpp"
#include "lpp/passage.hpp"
#include "lpp/rng.hpp"

namespace lpp {

std::string MethodRecord::describe() const {
  if (!tilted) return "direct";
  std::ostringstream os;
  os.precision(17);
  os << "tilted(lambda=" << lambda << ";halfwidth=" << corridor_halfwidth << ')';
  return os.str();
}

double RateEstimate::fekete_std_err() const noexcept {
  if (zero_hits() || !(p_hat > 0.0)) return std::numeric_limits<double>::infinity();
  return std_err / (p_hat * n);
}

int default_halfwidth(int n) {
  if (n <= 0) return 0;
  // ceil(n^(2/3)) computed on integers to avoid cbrt rounding at perfect cubes.
  int h = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n) * n)));
  while (h > 0 && static_cast<long long>(h - 1) * (h - 1) * (h - 1) >= static_cast<long long>(n) * n) --h;
  while (static_cast<long long>(h) * h * h < static_cast<long long>(n) * n) ++h;
  return h;
}

// ---------------------------------------------------------------------------
// Corridor

namespace {

// Waypoints strictly after `from` up to and including `to`, with l1 gaps as
// close to `spacing` as the leg length allows.
void append_leg(std::vector<LatticePoint>& out, LatticePoint from, LatticePoint to, int spacing) {
  const long long dx = to.x - from.x;
  const long long dy = to.y - from.y;
  const long long len = dx + dy;
  if (len == 0) return;
  const long long pieces = std::max<long long>(1, (len + spacing / 2) / spacing);
  for (long long j = 1; j <= pieces; ++j) {
    const long long s = (2 * j * len + pieces) / (2 * pieces);  // round(j len / pieces)
    const long long x = (2 * s * dx + len) / (2 * len);         // round(s dx / len)
    out.push_back({from.x + static_cast<int>(x), from.y + static_cast<int>(s - x)});
  }
}

// Whether segment a->b meets the square of half-side h centred at p. Inputs are
// small integers, so the correctly rounded quotients compare exactly.
bool segment_meets_square(LatticePoint a, LatticePoint b, LatticePoint p, int h) {
  double lo = 0.0;
  double hi = 1.0;
  auto clip = [&](double start, double delta, double box_lo, double box_hi) {
    if (delta == 0.0) return start >= box_lo && start <= box_hi;
    double s0 = (box_lo - start) / delta;
    double s1 = (box_hi - start) / delta;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
    return lo <= hi;
  };
  return clip(a.x, b.x - a.x, p.x - h, p.x + h) && clip(a.y, b.y - a.y, p.y - h, p.y + h);
}

}  // namespace

Corridor Corridor::make(double t, int n, int halfwidth, int spacing, double offset) {
  if (n < 1) throw ExtentError("corridor needs n >= 1");
  if (halfwidth < 0) throw std::invalid_argument("corridor halfwidth must be >= 0");
  if (spacing < 1) throw std::invalid_argument("corridor spacing must be >= 1");
  const LatticePoint apex = direction_target(t + offset, n);
  if (apex.x < 0 || apex.y < 0 || apex.x > n || apex.y > n) {
    std::ostringstream msg;
    msg << "corridor apex " << apex << " for t=" << t + offset << " leaves [0," << n << "]^2";
    throw ExtentError(msg.str());
  }
  Corridor c;
  c.t_ = t;
  c.n_ = n;
  c.halfwidth_ = halfwidth;
  c.spacing_ = spacing;
  c.offset_ = offset;
  c.waypoints_.push_back({0, 0});
  append_leg(c.waypoints_, {0, 0}, apex, spacing);
  c.apex_index_ = c.waypoints_.size() - 1;
  append_leg(c.waypoints_, apex, {n, n}, spacing);
  return c;
}

bool Corridor::covers(LatticePoint p) const noexcept {
  if (waypoints_.size() == 1) {
    const auto& w = waypoints_.front();
    return std::abs(p.x - w.x) <= halfwidth_ && std::abs(p.y - w.y) <= halfwidth_;
  }
  for (std::size_t k = 1; k < waypoints_.size(); ++k) {
    if (segment_meets_square(waypoints_[k - 1], waypoints_[k], p, halfwidth_)) return true;
  }
  return false;
}

std::vector<unsigned char> Corridor::mask(int width, int height) const {
  std::vector<unsigned char> out(site_count(width, height), 0);
  const auto stride = static_cast<std::size_t>(width) + 1;
  for (std::size_t k = 1; k < waypoints_.size(); ++k) {
    const auto a = waypoints_[k - 1];
    const auto b = waypoints_[k];
    const int x0 = std::max(0, std::min(a.x, b.x) - halfwidth_);
    const int x1 = std::min(width, std::max(a.x, b.x) + halfwidth_);
    const int y0 = std::max(0, std::min(a.y, b.y) - halfwidth_);
    const int y1 = std::min(height, std::max(a.y, b.y) + halfwidth_);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        auto& cell = out[static_cast<std::size_t>(y) * stride + x];
        if (!cell && segment_meets_square(a, b, {x, y}, halfwidth_)) cell = 1;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling machinery

namespace {

struct CountTally {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t point_hits = 0;
  void merge(const CountTally& o) noexcept {
    trials += o.trials;
    hits += o.hits;
    point_hits += o.point_hits;
  }
};

struct WeightedTally {
  std::uint64_t trials = 0;
  std::uint64_t raw_hits = 0;
  std::uint64_t raw_point_hits = 0;
  LogSumExp sum;         // sum of L 1{tail}
  LogSumExp sum_sq;      // sum of L^2 1{tail}
  LogSumExp point_sum;
  LogSumExp point_sum_sq;
  void merge(const WeightedTally& o) noexcept {
    trials += o.trials;
    raw_hits += o.raw_hits;
    raw_point_hits += o.raw_point_hits;
    sum.merge(o.sum);
    sum_sq.merge(o.sum_sq);
    point_sum.merge(o.point_sum);
    point_sum_sq.merge(o.point_sum_sq);
  }
  void record(double log_lr, bool tail, bool point) noexcept {
    ++trials;
    if (tail) {
      ++raw_hits;
      sum.add_log(log_lr);
      sum_sq.add_log(2.0 * log_lr);
    }
    if (point) {
      ++raw_point_hits;
      point_sum.add_log(log_lr);
      point_sum_sq.add_log(2.0 * log_lr);
    }
  }
};

// Welford moments with Chan's pairwise merge.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) noexcept {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) noexcept {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / total;
    m2 += o.m2 + d * d * count * o.count / total;
    count = total;
  }
};

EventEstimate direct_event(std::uint64_t hits, std::uint64_t trials) {
  EventEstimate e;
  const double n = static_cast<double>(trials);
  e.hits = static_cast<double>(hits);
  e.p_hat = e.hits / n;
  e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
  if (hits == 0) {
    e.ci_low = 0.0;
    e.ci_high = std::min(1.0, 3.0 / n);  // rule of three
  } else {
    const auto ci = wilson_interval(e.hits, n);
    e.ci_low = std::min(ci.low, e.p_hat);
    e.ci_high = std::max(ci.high, e.p_hat);
  }
  return e;
}

// Returns the estimate and log(p_hat).
std::pair<EventEstimate, double> weighted_event(const LogSumExp& sum, const LogSumExp& sum_sq,
                                                std::uint64_t raw_hits, std::uint64_t trials) {
  EventEstimate e;
  const double n = static_cast<double>(trials);
  const double log_n = std::log(n);
  if (raw_hits == 0) {
    e.ci_high = std::min(1.0, 3.0 / n);
    return {e, -std::numeric_limits<double>::infinity()};
  }
  const double log_p = sum.log_value() - log_n;
  e.hits = sum.value();
  e.p_hat = std::exp(log_p);
  const double second = std::exp(sum_sq.log_value() - log_n);
  const double var = trials > 1 ? std::max(0.0, second - e.p_hat * e.p_hat) * n / (n - 1.0) : 0.0;
  e.std_err = std::sqrt(var / n);
  e.ci_low = std::max(0.0, e.p_hat - kZ95 * e.std_err);
  e.ci_high = std::max(e.p_hat, std::min(1.0, e.p_hat + kZ95 * e.std_err));
  return {e, log_p};
}

RateEstimate make_rate(double t, double r, int n, std::uint64_t trials, const EventEstimate& tail,
                       double log_p, MethodRecord method) {
  RateEstimate est;
  est.t = t;
  est.r = r;
  est.n = n;
  est.n_samples = trials;
  est.hits = tail.hits;
  est.p_hat = tail.p_hat;
  est.ci_low = tail.ci_low;
  est.ci_high = tail.ci_high;
  est.std_err = tail.std_err;
  est.fekete_bound = tail.hits > 0.0 ? 0.0 - log_p / n : std::numeric_limits<double>::infinity();
  est.method = method;
  return est;
}

// Sites of one replicate drawn from the base law, or the tilted law inside the
// region; the log likelihood ratio of the base measure against the sampling
// measure is -lambda S + m cgf(lambda), with S the region's weight sum.
class TiltPlan {
 public:
  TiltPlan(const WeightDistribution& base, double lambda, int width, int height,
           std::vector<unsigned char> region)
      : base_(base),
        tilted_(base.tilted(lambda)),
        lambda_(lambda),
        log_mgf_(base.cgf(lambda)),
        width_(width),
        height_(height),
        region_(std::move(region)) {
    region_.at(0) = 0;  // the source weight never enters G
    region_size_ = static_cast<double>(std::count(region_.begin(), region_.end(), 1));
  }

  double lambda() const noexcept { return lambda_; }

  std::pair<WeightField, double> sample(std::uint64_t seed) const {
    std::vector<double> weights(region_.size());
    NeumaierSum tilted_sum;
    std::size_t k = 0;
    for (int j = 0; j <= height_; ++j) {
      for (int i = 0; i <= width_; ++i, ++k) {
        if (region_[k]) {
          weights[k] = site_weight(tilted_, seed, i, j);
          tilted_sum.add(weights[k]);
        } else {
          weights[k] = site_weight(base_, seed, i, j);
        }
      }
    }
    const double log_lr = -lambda_ * tilted_sum.value() + region_size_ * log_mgf_;
    return {WeightField(width_, height_, seed, base_, std::move(weights)), log_lr};
  }

 private:
  WeightDistribution base_;
  WeightDistribution tilted_;
  double lambda_;
  double log_mgf_;
  int width_;
  int height_;
  std::vector<unsigned char> region_;
  double region_size_ = 0.0;
};

void require_samples(std::uint64_t n_samples) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
}

void require_tilt_domain(const WeightDistribution& dist, double lambda) {
  if (!(lambda < dist.cgf_domain_sup()) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "tilt lambda=" << lambda << " outside the moment domain lambda < "
        << dist.cgf_domain_sup();
    throw DomainError(msg.str());
  }
}

LatticePoint checked_target(double t, int n) {
  if (n < 1) throw ExtentError("scale n must be >= 1");
  if (!(std::abs(t) <= 0.5)) throw ExtentError("direction t must lie in [-1/2, 1/2]");
  const auto target = direction_target(t, n);
  if (target.x < 0 || target.y < 0) {
    std::ostringstream msg;
    msg << "degenerate target " << target << " for t=" << t << ", n=" << n;
    throw ExtentError(msg.str());
  }
  return target;
}

void require_midpoint_args(double t, int n) {
  if (n < 2 || n % 2 != 0) throw ParityError("midpoint/endpoint tails need even n >= 2");
  if (!(t > 0.0 && t <= 0.5)) throw RangeError("midpoint/endpoint tails need 0 < t <= 1/2");
}

double resolve_mu0(const WeightDistribution& dist, const RunOptions& opts) {
  if (opts.mu0) {
    if (!(*opts.mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
    return *opts.mu0;
  }
  if (auto mu0 = diagonal_shape_constant(dist)) return *mu0;
  throw UnsupportedLawError("no closed-form mu_0 for " + dist.descriptor() +
                            "; supply mu0 explicitly");
}

double tilt_toward(const WeightDistribution& dist, double level) {
  return level > dist.mean() ? solve_tilt(dist, level) : 0.0;
}

// Location events on the anti-diagonal x + y = n: tail x >= threshold, point x == threshold.
enum class LineStatistic { kMidpoint, kEndpoint };

RateEstimate estimate_line_tail(const WeightDistribution& dist, double t, int n,
                                std::uint64_t n_samples, std::uint64_t seed,
                                const SamplingMethod& method, const RunOptions& opts,
                                LineStatistic stat) {
  require_samples(n_samples);
  require_midpoint_args(t, n);
  const int threshold = direction_target(t, n).x;

  auto locate = [&](const WeightField& field) {
    if (stat == LineStatistic::kMidpoint) {
      const auto result = last_passage(field, {0, 0}, {n, n});
      return result.geodesic[static_cast<std::size_t>(n)].x;
    }
    return point_to_line(field, n).endpoint.x;
  };

  if (std::holds_alternative<DirectMethod>(method)) {
    const auto tally = reduce_replicates<CountTally>(
        n_samples, opts.workers, [&](std::uint64_t i, CountTally& acc) {
          const auto field = sample_field(dist, n, n, derive_seed(seed, i));
          const int x = locate(field);
          ++acc.trials;
          acc.hits += x >= threshold;
          acc.point_hits += x == threshold;
        });
    const auto tail = direct_event(tally.hits, tally.trials);
    auto est = make_rate(t, 0.0, n, tally.trials, tail, std::log(tail.p_hat), MethodRecord{});
    est.r = std::numeric_limits<double>::quiet_NaN();
    est.point_event = direct_event(tally.point_hits, tally.trials);
    return est;
  }

  const auto& tilt = std::get<TiltedMethod>(method);
  const double lambda = tilt.lambda ? *tilt.lambda : solve_tilt(dist, resolve_mu0(dist, opts));
  require_tilt_domain(dist, lambda);
  const int halfwidth = tilt.halfwidth.value_or(default_halfwidth(n));
  const auto corridor = Corridor::make(t, n, halfwidth, tilt.spacing.value_or(1));
  auto region = corridor.mask(n, n);
  if (stat == LineStatistic::kEndpoint) {
    for (int y = 0; y <= n; ++y)
      for (int x = n - y + 1; x <= n; ++x) region[static_cast<std::size_t>(y) * (n + 1) + x] = 0;
  }
  const TiltPlan plan(dist, lambda, n, n, std::move(region));
  const auto tally = reduce_replicates<WeightedTally>(
      n_samples, opts.workers, [&](std::uint64_t i, WeightedTally& acc) {
        const auto [field, log_lr] = plan.sample(derive_seed(seed, i));
        const int x = locate(field);
        acc.record(log_lr, x >= threshold, x == threshold);
      });
  const auto [tail, log_p] = weighted_event(tally.sum, tally.sum_sq, tally.raw_hits, tally.trials);
  auto est = make_rate(t, std::numeric_limits<double>::quiet_NaN(), n, tally.trials, tail, log_p,
                       MethodRecord{true, lambda, halfwidth});
  est.point_event =
      weighted_event(tally.point_sum, tally.point_sum_sq, tally.raw_point_hits, tally.trials).first;
  return est;
}

}  // namespace

// ---------------------------------------------------------------------------
// Estimators

RateEstimate estimate_tail(const WeightDistribution& dist, double t, double r, int n,
                           std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opts) {
  require_samples(n_samples);
  if (!(r >= 0.0)) throw std::invalid_argument("tail level r must be >= 0");
  const auto target = checked_target(t, n);
  const double level = r * n;
  const auto tally = reduce_replicates<CountTally>(
      n_samples, opts.workers, [&](std::uint64_t i, CountTally& acc) {
        const auto field = sample_field(dist, target.x, target.y, derive_seed(seed, i));
        ++acc.trials;
        acc.hits += last_passage_value(field, {0, 0}, target) >= level;
      });
  const auto tail = direct_event(tally.hits, tally.trials);
  return make_rate(t, r, n, tally.trials, tail, std::log(tail.p_hat), MethodRecord{});
}

RateEstimate estimate_tail_tilted(const WeightDistribution& dist, double t, double r, int n,
                                  std::uint64_t n_samples, double lambda, const Corridor& corridor,
                                  std::uint64_t seed, const RunOptions& opts) {
  require_samples(n_samples);
  if (!(r >= 0.0)) throw std::invalid_argument("tail level r must be >= 0");
  require_tilt_domain(dist, lambda);
  const auto target = checked_target(t, n);
  if (corridor.n() != n || corridor.apex() != target) {
    std::ostringstream msg;
    msg << "corridor (n=" << corridor.n() << ", apex " << corridor.apex()
        << ") does not aim at target " << target << " for n=" << n;
    throw std::invalid_argument(msg.str());
  }
  const double level = r * n;
  const TiltPlan plan(dist, lambda, target.x, target.y, corridor.mask(target.x, target.y));
  const auto tally = reduce_replicates<WeightedTally>(
      n_samples, opts.workers, [&](std::uint64_t i, WeightedTally& acc) {
        const auto [field, log_lr] = plan.sample(derive_seed(seed, i));
        acc.record(log_lr, last_passage_value(field, {0, 0}, target) >= level, false);
      });
  const auto [tail, log_p] = weighted_event(tally.sum, tally.sum_sq, tally.raw_hits, tally.trials);
  return make_rate(t, r, n, tally.trials, tail, log_p,
                   MethodRecord{true, lambda, corridor.halfwidth()});
}

RateEstimate estimate_tail(const WeightDistribution& dist, double t, double r, int n,
                           std::uint64_t n_samples, std::uint64_t seed,
                           const SamplingMethod& method, const RunOptions& opts) {
  if (std::holds_alternative<DirectMethod>(method)) {
    return estimate_tail(dist, t, r, n, n_samples, seed, opts);
  }
  const auto& tilt = std::get<TiltedMethod>(method);
  checked_target(t, n);
  const double lambda = tilt.lambda ? *tilt.lambda : tilt_toward(dist, r);
  const auto corridor = Corridor::make(t, n, tilt.halfwidth.value_or(default_halfwidth(n)),
                                       tilt.spacing.value_or(1));
  return estimate_tail_tilted(dist, t, r, n, n_samples, lambda, corridor, seed, opts);
}

RateEstimate estimate_midpoint_tail(const WeightDistribution& dist, double t, int n,
                                    std::uint64_t n_samples, std::uint64_t seed,
                                    const SamplingMethod& method, const RunOptions& opts) {
  return estimate_line_tail(dist, t, n, n_samples, seed, method, opts, LineStatistic::kMidpoint);
}

RateEstimate estimate_endpoint_tail(const WeightDistribution& dist, double t, int n,
                                    std::uint64_t n_samples, std::uint64_t seed,
                                    const SamplingMethod& method, const RunOptions& opts) {
  return estimate_line_tail(dist, t, n, n_samples, seed, method, opts, LineStatistic::kEndpoint);
}

ShapeEstimate estimate_shape(const WeightDistribution& dist, double t, int n,
                             std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opts) {
  require_samples(n_samples);
  const auto target = checked_target(t, n);
  const auto moments = reduce_replicates<Moments>(
      n_samples, opts.workers, [&](std::uint64_t i, Moments& acc) {
        const auto field = sample_field(dist, target.x, target.y, derive_seed(seed, i));
        acc.add(last_passage_value(field, {0, 0}, target) / n);
      });
  ShapeEstimate est;
  est.t = t;
  est.n = n;
  est.n_samples = n_samples;
  est.mean = moments.mean;
  est.std_err = moments.count > 1.0
                    ? std::sqrt(moments.m2 / (moments.count - 1.0)) / std::sqrt(moments.count)
                    : 0.0;
  return est;
}

std::vector<RateEstimate> fekete_curve(const WeightDistribution& dist, double t, double r,
                                       const std::vector<int>& n_list,
                                       std::uint64_t per_n_samples, std::uint64_t seed,
                                       const SamplingMethod& method, const RunOptions& opts) {
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("n_list must be ascending");
  }
  std::vector<RateEstimate> out;
  out.reserve(n_list.size());
  for (int n : n_list) out.push_back(estimate_tail(dist, t, r, n, per_n_samples, seed, method, opts));
  return out;
}

MonotoneReport check_monotone(std::vector<RateEstimate> estimates) {
  MonotoneReport report;
  report.estimates = std::move(estimates);
  std::optional<std::size_t> previous;
  for (std::size_t i = 0; i < report.estimates.size(); ++i) {
    const auto& cur = report.estimates[i];
    if (cur.zero_hits()) {
      report.zero_hit.push_back(i);
      continue;
    }
    if (previous) {
      const auto& prev = report.estimates[*previous];
      const double se = std::hypot(prev.fekete_std_err(), cur.fekete_std_err());
      if (prev.fekete_bound - cur.fekete_bound > 2.0 * se) report.violations.push_back(*previous);
    }
    previous = i;
  }
  report.pass = report.violations.empty();
  return report;
}

MonotoneReport verify_monotone_in_t(const WeightDistribution& dist, double r, int n,
                                    const std::vector<double>& t_list,
                                    std::uint64_t per_t_samples, std::uint64_t seed,
                                    const SamplingMethod& method, const RunOptions& opts) {
  if (!std::is_sorted(t_list.begin(), t_list.end())) {
    throw std::invalid_argument("t_list must be ascending");
  }
  for (double t : t_list) {
    if (!(t >= 0.0 && t <= 0.5)) throw RangeError("t_list entries must lie in [0, 1/2]");
  }
  std::vector<RateEstimate> estimates;
  for (double t : t_list) {
    estimates.push_back(estimate_tail(dist, t, r, n, per_t_samples, seed, method, opts));
  }
  return check_monotone(std::move(estimates));
}

RateEstimate estimate_left_tail(const WeightDistribution& dist, double eps, int n,
                                std::uint64_t n_samples, std::uint64_t seed,
                                std::optional<double> lambda, const RunOptions& opts) {
  require_samples(n_samples);
  if (n < 2 || n % 2 != 0) throw ParityError("left tail needs even n >= 2");
  const double mu0 = resolve_mu0(dist, opts);
  if (!(eps >= 0.0 && eps < mu0)) throw RangeError("left-tail eps must lie in [0, mu0)");
  const double level_per_n = mu0 - eps;
  const double down = lambda ? *lambda : solve_tilt(dist, dist.mean() * level_per_n / mu0);
  require_tilt_domain(dist, down);

  const LatticePoint target{n / 2, n / 2};
  const double level = level_per_n * n;
  const TiltPlan plan(dist, down, target.x, target.y,
                      std::vector<unsigned char>(site_count(target.x, target.y), 1));
  const auto tally = reduce_replicates<WeightedTally>(
      n_samples, opts.workers, [&](std::uint64_t i, WeightedTally& acc) {
        const auto [field, log_lr] = plan.sample(derive_seed(seed, i));
        acc.record(log_lr, last_passage_value(field, {0, 0}, target) <= level, false);
      });
  const auto [tail, log_p] = weighted_event(tally.sum, tally.sum_sq, tally.raw_hits, tally.trials);
  return make_rate(0.0, level_per_n, n, tally.trials, tail, log_p, MethodRecord{true, down, n / 2});
}

bool is_superexponential(const std::vector<RateEstimate>& estimates) {
  if (estimates.size() < 2) return false;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i].zero_hits()) return false;
    if (i == 0) continue;
    const auto& a = estimates[i - 1];
    const auto& b = estimates[i];
    const double se = std::hypot(a.fekete_std_err(), b.fekete_std_err());
    if (!(b.fekete_bound - a.fekete_bound > se)) return false;
  }
  return true;
}

LeftTailReport left_tail_scan(const WeightDistribution& dist, double eps,
                              const std::vector<int>& n_list, std::uint64_t per_n_samples,
                              std::uint64_t seed, std::optional<double> lambda,
                              const RunOptions& opts) {
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("n_list must be ascending");
  }
  LeftTailReport report;
  report.mu0 = resolve_mu0(dist, opts);
  report.eps = eps;
  for (int n : n_list) {
    report.estimates.push_back(estimate_left_tail(dist, eps, n, per_n_samples, seed, lambda, opts));
  }
  report.superexponential = is_superexponential(report.estimates);
  return report;
}

IdentityReport midpoint_rate_identity(const WeightDistribution& dist, double t, int n,
                                      std::uint64_t budget, std::uint64_t seed,
                                      const SamplingMethod& midpoint_method,
                                      const SamplingMethod& passage_method,
                                      const RunOptions& opts) {
  require_midpoint_args(t, n);
  IdentityReport report;
  report.t = t;
  report.n = n;
  report.mu0 = resolve_mu0(dist, opts);
  report.midpoint = estimate_midpoint_tail(dist, t, n, budget, seed, midpoint_method, opts);
  report.passage =
      estimate_tail(dist, t, report.mu0, n, budget, mix64(seed), passage_method, opts);
  report.a = 0.5 * report.midpoint.fekete_bound;
  report.a_std_err = 0.5 * report.midpoint.fekete_std_err();
  report.b = report.passage.fekete_bound;
  report.b_std_err = report.passage.fekete_std_err();
  const double scale = std::max(report.a, report.b);
  report.relative_gap = scale > 0.0 ? std::abs(report.a - report.b) / scale : 0.0;
  if (t == 0.5) report.closed_form_per_factor = cramer_rate(dist, report.mu0);
  return report;
}

}  // namespace lpp
