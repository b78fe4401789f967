#pragma once

#include <cstdint>
#include <string>

#include "slidecard/rsra.hpp"
#include "slidecard/slea.hpp"

namespace slidecard {

// Every sketch parameter and the master seed, read from one key = value file
// and overridable flag by flag. Primed names configure the linear-estimator
// array, unprimed ones the rough-estimator array.
struct SketchParams {
  uint32_t q = 17;
  uint32_t r = 5;
  uint32_t delta = 5;
  uint32_t eta = 8;
  uint32_t q_prime = 17;
  uint32_t r_prime = 5;
  uint32_t delta_prime = 16;
  uint32_t eta_prime = 16384;
  uint64_t theta = 1024;
  uint64_t seed = 1;

  void validate() const;  // throws ConfigError
  uint32_t tau() const;   // sampling threshold derived from theta and eta

  HashSeeds seeds() const;
  RsraConfig rsra_config() const;
  SleaConfig slea_config() const;

  // keys: q, r, delta, eta, q_prime, r_prime, delta_prime, eta_prime,
  // theta, seed; '#' starts a comment; unknown keys are rejected
  static SketchParams parse(const std::string& text);
  static SketchParams load_file(const std::string& path);
};

}  // namespace slidecard
