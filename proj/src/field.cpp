#include "lpp/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <new>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lpp/error.hpp"

namespace lpp {

std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

WeightField::WeightField(int width, int height, std::uint64_t seed,
                         WeightDistribution distribution, std::vector<double> weights)
    : width_(width),
      height_(height),
      seed_(seed),
      distribution_(distribution),
      weights_(std::move(weights)) {
  if (width_ < 0 || height_ < 0) throw ExtentError("field extents must be non-negative");
  if (weights_.size() != site_count(width_, height_)) {
    throw std::invalid_argument("weight count " + std::to_string(weights_.size()) +
                                " does not match a " + std::to_string(width_ + 1) + "x" +
                                std::to_string(height_ + 1) + " lattice");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("site weights must be non-negative");
  }
}

std::size_t site_count(int width, int height) {
  if (width < 0 || height < 0) throw ExtentError("field extents must be non-negative");
  const auto cols = static_cast<std::size_t>(width) + 1;
  const auto rows = static_cast<std::size_t>(height) + 1;
  if (rows > std::numeric_limits<std::size_t>::max() / sizeof(double) / cols) {
    throw ResourceError("lattice too large to address", std::numeric_limits<std::size_t>::max());
  }
  return cols * rows;
}

WeightField sample_field(const WeightDistribution& dist, int width, int height,
                         std::uint64_t seed) {
  const std::size_t sites = site_count(width, height);
  std::vector<double> weights;
  try {
    weights.resize(sites);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate weight field of " +
                            std::to_string(sites * sizeof(double)) + " bytes",
                        sites * sizeof(double));
  }
  std::size_t k = 0;
  for (int j = 0; j <= height; ++j) {
    for (int i = 0; i <= width; ++i) weights[k++] = site_weight(dist, seed, i, j);
  }
  return WeightField(width, height, seed, dist, std::move(weights));
}

namespace {

constexpr std::array<char, 4> kMagic = {'L', 'P', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kTagExponential = 1;
constexpr std::uint32_t kTagGamma = 2;

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw std::runtime_error("truncated field file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& os, const WeightField& field) {
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.width()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.height()));
  put_le<std::uint64_t>(os, field.seed());
  const auto& kind = field.distribution().kind();
  if (const auto* e = std::get_if<ExponentialLaw>(&kind)) {
    put_le<std::uint32_t>(os, kTagExponential);
    put_le<double>(os, e->rate);
  } else {
    const auto& g = std::get<GammaLaw>(kind);
    put_le<std::uint32_t>(os, kTagGamma);
    put_le<double>(os, g.shape);
    put_le<double>(os, g.rate);
  }
  for (double w : field.weights()) put_le<double>(os, w);
  if (!os) throw std::runtime_error("failed to write field");
}

WeightField read_field(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not an LPPF field file");
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != kVersion) {
    throw std::runtime_error("unsupported LPPF version " + std::to_string(version));
  }
  const auto width = get_le<std::uint32_t>(is);
  const auto height = get_le<std::uint32_t>(is);
  if (width > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      height > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw ExtentError("field extents out of range");
  }
  const auto seed = get_le<std::uint64_t>(is);
  const auto tag = get_le<std::uint32_t>(is);
  WeightDistribution dist = WeightDistribution::exponential(1.0);
  if (tag == kTagExponential) {
    dist = WeightDistribution::exponential(get_le<double>(is));
  } else if (tag == kTagGamma) {
    const double shape = get_le<double>(is);
    dist = WeightDistribution::gamma(shape, get_le<double>(is));
  } else {
    throw std::runtime_error("unknown distribution tag " + std::to_string(tag));
  }
  const std::size_t sites = site_count(static_cast<int>(width), static_cast<int>(height));
  std::vector<double> weights(sites);
  for (auto& w : weights) w = get_le<double>(is);
  return WeightField(static_cast<int>(width), static_cast<int>(height), seed, dist,
                     std::move(weights));
}

}  // namespace lpp
