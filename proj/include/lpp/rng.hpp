#pragma once

#include <array>
#include <cstdint>

namespace lpp {

/// Philox4x32-10 counter-based block function (Salmon, Moraes, Dror, Shaw 2011).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits with no
/// internal state, so any draw can be regenerated from its coordinates alone.
/// Only integer multiplies and xors are used: results are bit-identical on
/// every conforming platform.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < kRounds; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// SplitMix64 finalizer; used to derive per-replicate seeds from a base seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed of replicate `index` under experiment seed `base`. Replicates with the
/// same (base, index) see the same field, which is what seed pairing relies on.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ mix64(index + 0x5851F42D4C957F2Dull));
}

/// Stream of uniforms attached to one lattice site.
///
/// Keyed by (seed, i, j); successive draws advance a block counter. A site's
/// draws depend only on these coordinates, never on visiting order.
class SiteStream {
 public:
  SiteStream(std::uint64_t seed, std::uint32_t i, std::uint32_t j) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        i_(i),
        j_(j) {}

  std::uint64_t next_u64() noexcept {
    if (cursor_ == 2) {
      const auto out = Philox4x32::apply({i_, j_, block_, 0u}, key_);
      buffer_[0] = (std::uint64_t{out[0]} << 32) | out[1];
      buffer_[1] = (std::uint64_t{out[2]} << 32) | out[3];
      ++block_;
      cursor_ = 0;
    }
    return buffer_[cursor_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns 0.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t i_;
  std::uint32_t j_;
  std::uint32_t block_ = 0;
  int cursor_ = 2;
  std::array<std::uint64_t, 2> buffer_{};
};

}  // namespace lpp
