#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "lpp/distributions.hpp"

namespace lpp {

struct LatticePoint {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
  /// Coordinatewise order: a <= b iff a.x <= b.x and a.y <= b.y.
  constexpr bool precedes(const LatticePoint& other) const noexcept {
    return x <= other.x && y <= other.y;
  }
  constexpr int level() const noexcept { return x + y; }
};

std::ostream& operator<<(std::ostream& os, const LatticePoint& p);

/// One realization of i.i.d. site weights on the sites (i, j), 0 <= i <= width,
/// 0 <= j <= height. Immutable once built.
class WeightField {
 public:
  /// Takes ownership of explicit weights, row-major: site (i, j) at
  /// j * (width + 1) + i. Throws if sizes mismatch or any weight is negative.
  WeightField(int width, int height, std::uint64_t seed, WeightDistribution distribution,
              std::vector<double> weights);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const WeightDistribution& distribution() const noexcept { return distribution_; }

  double operator()(int i, int j) const noexcept {
    return weights_[static_cast<std::size_t>(j) * (static_cast<std::size_t>(width_) + 1) +
                    static_cast<std::size_t>(i)];
  }
  double at(LatticePoint p) const noexcept { return (*this)(p.x, p.y); }

  bool contains(LatticePoint p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x <= width_ && p.y <= height_;
  }

  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const WeightField&, const WeightField&) = default;

 private:
  int width_;
  int height_;
  std::uint64_t seed_;
  WeightDistribution distribution_;
  std::vector<double> weights_;
};

/// Weight of site (i, j) under `seed`: a pure function of (dist, seed, i, j).
inline double site_weight(const WeightDistribution& dist, std::uint64_t seed, int i, int j) {
  SiteStream stream(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  return sample(dist, stream);
}

/// Number of sites in a (width + 1) x (height + 1) rectangle; throws
/// ResourceError if it cannot be addressed.
std::size_t site_count(int width, int height);

/// Samples every site from its own counter-based stream, so the restriction of
/// a larger field to a sub-rectangle anchored at the origin reproduces the
/// smaller field exactly.
WeightField sample_field(const WeightDistribution& dist, int width, int height, std::uint64_t seed);

/// Binary dump: "LPPF", u32 version, u32 width, u32 height, u64 seed, u32 law
/// tag (1 exponential, 2 gamma), f64 params (rate | shape, rate), then the
/// row-major f64 weights. Everything little-endian.
void write_field(std::ostream& os, const WeightField& field);
WeightField read_field(std::istream& is);

}  // namespace lpp
