#include "lpp/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lpp/error.hpp"

namespace lpp {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double parse_positive(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) +
                                "': expected a positive real");
  }
  return value;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Marsaglia polar method; uses only sqrt (correctly rounded) and log.
double standard_normal(SiteStream& stream) {
  for (;;) {
    const double u = 2.0 * stream.uniform() - 1.0;
    const double v = 2.0 * stream.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Marsaglia & Tsang (2000), shape >= 1, unit rate.
double gamma_unit_rate(double shape, SiteStream& stream) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

WeightDistribution WeightDistribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential rate must be positive and finite");
  }
  return WeightDistribution(ExponentialLaw{rate});
}

WeightDistribution WeightDistribution::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma rate must be positive and finite");
  }
  return WeightDistribution(GammaLaw{shape, rate});
}

WeightDistribution WeightDistribution::parse(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("distribution descriptor '" + std::string(descriptor) +
                                "' must look like exp:<rate> or gamma:<shape>,<rate>");
  }
  const auto name = descriptor.substr(0, colon);
  const auto params = descriptor.substr(colon + 1);
  if (name == "exp" || name == "exponential") {
    return exponential(parse_positive(params, "exponential rate"));
  }
  if (name == "gamma") {
    const auto comma = params.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("gamma descriptor needs gamma:<shape>,<rate>");
    }
    return gamma(parse_positive(params.substr(0, comma), "gamma shape"),
                 parse_positive(params.substr(comma + 1), "gamma rate"));
  }
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

double WeightDistribution::rate() const noexcept {
  return std::visit([](const auto& law) { return law.rate; }, kind_);
}

double WeightDistribution::mean() const noexcept {
  return std::visit(Overloaded{[](const ExponentialLaw& e) { return 1.0 / e.rate; },
                               [](const GammaLaw& g) { return g.shape / g.rate; }},
                    kind_);
}

double WeightDistribution::variance() const noexcept {
  return std::visit(Overloaded{[](const ExponentialLaw& e) { return 1.0 / (e.rate * e.rate); },
                               [](const GammaLaw& g) { return g.shape / (g.rate * g.rate); }},
                    kind_);
}

double WeightDistribution::cgf_domain_sup() const noexcept { return rate(); }

namespace {
double shape_of(const WeightDistribution::Kind& kind) {
  return std::visit(Overloaded{[](const ExponentialLaw&) { return 1.0; },
                               [](const GammaLaw& g) { return g.shape; }},
                    kind);
}

void check_cgf_domain(const WeightDistribution& dist, double lambda) {
  if (!(lambda < dist.cgf_domain_sup()) || std::isnan(lambda)) {
    std::ostringstream msg;
    msg << "cgf argument " << lambda << " outside domain lambda < " << dist.cgf_domain_sup();
    throw DomainError(msg.str());
  }
}
}  // namespace

// Both laws are Gamma{k, theta}: cgf = -k log(1 - lambda/theta).
double WeightDistribution::cgf(double lambda) const {
  check_cgf_domain(*this, lambda);
  return -shape_of(kind_) * std::log1p(-lambda / rate());
}

double WeightDistribution::cgf_derivative(double lambda) const {
  check_cgf_domain(*this, lambda);
  return shape_of(kind_) / (rate() - lambda);
}

double WeightDistribution::cgf_second_derivative(double lambda) const {
  check_cgf_domain(*this, lambda);
  const double gap = rate() - lambda;
  return shape_of(kind_) / (gap * gap);
}

WeightDistribution WeightDistribution::tilted(double lambda) const {
  check_cgf_domain(*this, lambda);
  return std::visit(
      Overloaded{[&](const ExponentialLaw& e) { return exponential(e.rate - lambda); },
                 [&](const GammaLaw& g) { return gamma(g.shape, g.rate - lambda); }},
      kind_);
}

AssumptionReport WeightDistribution::assumptions() const noexcept {
  // Exponential and Gamma laws: exponential moments up to the rate, a density,
  // support [0, inf).
  return AssumptionReport{true, true, true, true};
}

std::string WeightDistribution::descriptor() const {
  return std::visit(
      Overloaded{[](const ExponentialLaw& e) { return "exp:" + format_real(e.rate); },
                 [](const GammaLaw& g) {
                   return "gamma:" + format_real(g.shape) + "," + format_real(g.rate);
                 }},
      kind_);
}

double exponential_inverse_cdf(double u, double rate) noexcept { return -std::log1p(-u) / rate; }

double sample(const WeightDistribution& dist, SiteStream& stream) {
  return std::visit(
      Overloaded{[&](const ExponentialLaw& e) {
                   return exponential_inverse_cdf(stream.uniform(), e.rate);
                 },
                 [&](const GammaLaw& g) {
                   if (g.shape >= 1.0) return gamma_unit_rate(g.shape, stream) / g.rate;
                   // Shape boost: Gamma(k) = Gamma(k + 1) * U^(1/k).
                   const double boosted = gamma_unit_rate(g.shape + 1.0, stream);
                   return boosted * std::pow(stream.uniform_open(), 1.0 / g.shape) / g.rate;
                 }},
      dist.kind());
}

double solve_tilt(const WeightDistribution& dist, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("tilt target must be a positive finite mean");
  }
  const double lambda_max = dist.cgf_domain_sup();
  auto residual = [&](double lambda) { return dist.cgf_derivative(lambda) - x; };

  // Bracket [lo, hi] with residual(lo) <= 0 < residual(hi); hi approaches
  // lambda_max where cgf' blows up.
  double lo = 0.0;
  double hi = lambda_max;
  if (residual(0.0) > 0.0) {
    hi = 0.0;
    lo = -1.0;
    while (residual(lo) > 0.0) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e300) throw DomainError("tilt target below the reachable mean range");
    }
  } else if (residual(0.0) == 0.0) {
    return 0.0;
  }

  constexpr double kTol = 1e-12;
  double lambda = lo;
  for (int iter = 0; iter < 500; ++iter) {
    const double f = residual(lambda);
    if (f == 0.0) return lambda;
    if (f < 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    double next = lambda - f / dist.cgf_second_derivative(lambda);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - lambda);
    lambda = next;
    if (step < kTol || hi - lo < kTol) break;
  }
  return lambda;
}

double cramer_rate(const WeightDistribution& dist, double x) {
  if (!(x > 0.0)) throw DomainError("cramer_rate requires x > 0");
  if (x <= dist.mean()) return 0.0;
  if (std::isinf(x)) return std::numeric_limits<double>::infinity();
  const double lambda = solve_tilt(dist, x);
  return lambda * x - dist.cgf(lambda);
}

double corner_rate_theoretical(const WeightDistribution& dist) {
  if (!(dist == WeightDistribution::exponential(1.0))) {
    throw UnsupportedLawError("corner rate needs a closed-form mu_0; only Exponential{1} is "
                              "supported, got " +
                              dist.descriptor());
  }
  return 2.0 * cramer_rate(dist, 2.0);
}

std::optional<double> diagonal_shape_constant(const WeightDistribution& dist) noexcept {
  if (const auto* e = std::get_if<ExponentialLaw>(&dist.kind())) return 2.0 / e->rate;
  return std::nullopt;
}

}  // namespace lpp
