#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lpp/field.hpp"

namespace lpp::oracle {

inline constexpr int kMaxEnumerationN = 10;

/// Every up-right path (0,0) -> (n,n), one bitmask per path: bit (2n - 1 - s)
/// set means step s is e1. Iterates in increasing mask order.
class PathEnumeration {
 public:
  explicit PathEnumeration(int n);

  int n() const noexcept { return n_; }
  /// C(2n, n).
  std::uint64_t size() const noexcept;

  template <class Fn>
  void for_each(Fn&& fn) const {
    const int steps = 2 * n_;
    if (n_ == 0) {
      fn(std::uint32_t{0});
      return;
    }
    std::uint32_t mask = (std::uint32_t{1} << n_) - 1;
    const std::uint32_t limit = std::uint32_t{1} << steps;
    while (mask < limit) {
      fn(mask);
      // Gosper's hack: next larger integer with the same popcount.
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t ripple = mask + low;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }

  /// Sites visited by `mask`, starting at (0,0).
  std::vector<LatticePoint> decode(std::uint32_t mask) const;

 private:
  int n_;
};

struct BruteForceResult {
  double value = 0.0;
  std::vector<LatticePoint> path;
  std::uint64_t paths_examined = 0;
};

/// Literal maximization of the path weight (source excluded) over all C(2n, n)
/// paths. Among maximizers the one taking e1 at the earliest divergence wins.
/// Throws RangeError for n > 10 or n < 0, ExtentError if the field is too small.
BruteForceResult brute_force_passage(const WeightField& field, int n);

/// Field on [0,n]^2 with integer weights drawn uniformly from {0, ..., levels-1}.
/// Sums are exact, so many geodesics tie and the tie-break is exercised.
/// The distribution label is nominal (Exponential{1}).
WeightField integer_field(int n, std::uint64_t seed, int levels = 3);

struct Agreement {
  bool value = false;  // bit-identical passage values
  bool path = false;   // identical geodesics
  bool both() const noexcept { return value && path; }
};

/// Dynamic program against brute force on (0,0) -> (n,n).
Agreement compare_with_brute_force(const WeightField& field, int n);

/// C(a, b) exactly; valid while the result fits in 64 bits (a <= 66 at worst).
std::uint64_t binomial(int a, int b);

/// Exact P(Mid(U)·e1 = n/2 + k) = C(n, n/2+k)^2 / C(2n, n) for n <= 20, as a
/// (numerator, denominator) pair.
std::pair<std::uint64_t, std::uint64_t> uniform_midpoint_prob_exact(int n, int k);

/// Same probability as a double: exact rational for n <= 20, log-gamma with
/// compensated summation beyond. Throws RangeError for |k| > n/2, ParityError
/// for odd n.
double uniform_midpoint_prob(int n, int k);

/// -(1/n) log P((n,0) in U) = (1/n) log C(2n, n).
double uniform_corner_rate(int n);

}  // namespace lpp::oracle
