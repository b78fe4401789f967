#include "slidecard/linear_counting.hpp"

#include <algorithm>
#include <cmath>

#include "slidecard/errors.hpp"

namespace slidecard {

LinearEstimate le_estimate(double weight, uint32_t eta_prime) {
  const double eta = static_cast<double>(eta_prime);
  if (weight <= 0.0) return {0.0, false};
  if (weight >= eta) return {eta * std::log(eta), true};
  return {-eta * std::log((eta - weight) / eta), false};
}

double corrected_weight(double usle_weight, double sf_product, uint32_t eta_prime) {
  if (sf_product >= 1.0)
    throw SaturationError("corrected weight: setting-factor product is 1, estimate unusable");
  if (sf_product < 0.0) sf_product = 0.0;
  const double eta = static_cast<double>(eta_prime);
  double w = (usle_weight - eta * sf_product) / (1.0 - sf_product);
  return std::clamp(w, 0.0, eta);
}

}  // namespace slidecard
