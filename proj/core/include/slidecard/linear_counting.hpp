#pragma once

#include <cstdint>

namespace slidecard {

// setting-factor products this close to 1 make the correction unusable
inline constexpr double kSaturationEps = 1e-9;

struct LinearEstimate {
  double value = 0.0;
  bool saturated = false;  // weight hit eta_prime; value is the saturation ceiling
};

// -eta' * ln((eta' - weight) / eta'). A weight of eta' has no finite estimate;
// it is substituted by eta' - 1, yielding the ceiling eta' * ln(eta'), and the
// result is tagged saturated.
LinearEstimate le_estimate(double weight, uint32_t eta_prime);

// Removes the expected contribution of colliding hosts from a union weight:
// (weight - eta' * sf_product) / (1 - sf_product), clamped to [0, eta'].
// Throws SaturationError when sf_product >= 1.
double corrected_weight(double usle_weight, double sf_product, uint32_t eta_prime);

}  // namespace slidecard
