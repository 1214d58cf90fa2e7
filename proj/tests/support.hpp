#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "lpp/field.hpp"

namespace lpp::testing {

// Exact P(Gamma(k, 1) >= x): the corner passage value is a sum of k Exp(1) weights.
inline double gamma_tail(int k, double x) { return boost::math::gamma_q(static_cast<double>(k), x); }

inline WeightField explicit_field(int width, int height, std::vector<double> weights) {
  return WeightField(width, height, 0, WeightDistribution::exponential(1.0), std::move(weights));
}

// Field with weights from an independent generator, for property tests.
inline WeightField random_field(std::mt19937_64& gen, int width, int height) {
  std::exponential_distribution<double> law(1.0);
  std::vector<double> w(site_count(width, height));
  for (auto& x : w) x = law(gen);
  return explicit_field(width, height, std::move(w));
}

}  // namespace lpp::testing
