#include "lpp/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <numeric>
#include <string>

#include "lpp/error.hpp"
#include "lpp/numerics.hpp"
#include "lpp/passage.hpp"
#include "lpp/rng.hpp"

namespace lpp::oracle {

PathEnumeration::PathEnumeration(int n) : n_(n) {
  if (n < 0 || n > kMaxEnumerationN) {
    throw RangeError("path enumeration supports 0 <= n <= " + std::to_string(kMaxEnumerationN) +
                     ", got " + std::to_string(n));
  }
}

std::uint64_t PathEnumeration::size() const noexcept {
  return binomial(2 * n_, n_);
}

std::vector<LatticePoint> PathEnumeration::decode(std::uint32_t mask) const {
  const int steps = 2 * n_;
  std::vector<LatticePoint> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  LatticePoint p{0, 0};
  path.push_back(p);
  for (int s = 0; s < steps; ++s) {
    if (mask & (std::uint32_t{1} << (steps - 1 - s))) {
      ++p.x;
    } else {
      ++p.y;
    }
    path.push_back(p);
  }
  return path;
}

BruteForceResult brute_force_passage(const WeightField& field, int n) {
  const PathEnumeration paths(n);
  if (field.width() < n || field.height() < n) {
    throw ExtentError("field does not cover (0,0)..(" + std::to_string(n) + "," +
                      std::to_string(n) + ")");
  }
  const int steps = 2 * n;
  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  paths.for_each([&](std::uint32_t mask) {
    int x = 0;
    int y = 0;
    double sum = 0.0;
    for (int s = 0; s < steps; ++s) {
      if (mask & (std::uint32_t{1} << (steps - 1 - s))) {
        ++x;
      } else {
        ++y;
      }
      sum += field(x, y);
    }
    ++best.paths_examined;
    // Masks arrive in increasing order and a larger mask takes e1 at the first
    // differing step, so >= keeps the e1-first maximizer.
    if (sum >= best.value) {
      best.value = sum;
      best_mask = mask;
    }
  });
  best.path = paths.decode(best_mask);
  return best;
}

WeightField integer_field(int n, std::uint64_t seed, int levels) {
  if (levels < 1) throw std::invalid_argument("integer_field needs levels >= 1");
  std::vector<double> weights(site_count(n, n));
  std::size_t k = 0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i, ++k) {
      SiteStream stream(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      weights[k] = static_cast<double>(stream.next_u64() % static_cast<std::uint64_t>(levels));
    }
  }
  return WeightField(n, n, seed, WeightDistribution::exponential(1.0), std::move(weights));
}

Agreement compare_with_brute_force(const WeightField& field, int n) {
  const auto brute = brute_force_passage(field, n);
  const auto dp = last_passage(field, {0, 0}, {n, n});
  Agreement a;
  a.value = std::bit_cast<std::uint64_t>(brute.value) == std::bit_cast<std::uint64_t>(dp.value);
  a.path = brute.path == dp.geodesic;
  return a;
}

std::uint64_t binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t result = 1;
  for (int i = 1; i <= b; ++i) {
    // result * (a - b + i) is divisible by i, so i / g divides (a - b + i).
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = static_cast<std::uint64_t>(a - b + i) / (i / g);
    if (result / g > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw RangeError("binomial C(" + std::to_string(a) + "," + std::to_string(b) +
                       ") overflows 64 bits");
    }
    result = result / g * factor;
  }
  return result;
}

namespace {

void check_midpoint_args(int n, int k) {
  if (n < 0 || n % 2 != 0) throw ParityError("uniform midpoint law needs even n >= 0");
  if (std::abs(k) > n / 2) {
    throw RangeError("offset k=" + std::to_string(k) + " outside [-n/2, n/2] for n=" +
                     std::to_string(n));
  }
}

double log_binomial(int a, int b) {
  NeumaierSum sum;
  sum.add(std::lgamma(a + 1.0));
  sum.add(-std::lgamma(b + 1.0));
  sum.add(-std::lgamma(a - b + 1.0));
  return sum.value();
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> uniform_midpoint_prob_exact(int n, int k) {
  check_midpoint_args(n, k);
  if (n > 20) throw RangeError("exact uniform midpoint law limited to n <= 20");
  const std::uint64_t c = binomial(n, n / 2 + k);
  return {c * c, binomial(2 * n, n)};
}

double uniform_midpoint_prob(int n, int k) {
  check_midpoint_args(n, k);
  if (n <= 20) {
    const auto [num, den] = uniform_midpoint_prob_exact(n, k);
    return static_cast<double>(num) / static_cast<double>(den);
  }
  NeumaierSum log_p;
  log_p.add(2.0 * log_binomial(n, n / 2 + k));
  log_p.add(-log_binomial(2 * n, n));
  return std::exp(log_p.value());
}

double uniform_corner_rate(int n) {
  if (n < 2 || n % 2 != 0) throw ParityError("uniform corner rate needs even n >= 2");
  if (n <= 20) return std::log(static_cast<double>(binomial(2 * n, n))) / n;
  return log_binomial(2 * n, n) / n;
}

}  // namespace lpp::oracle
