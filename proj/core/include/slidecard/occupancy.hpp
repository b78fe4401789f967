#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace slidecard {

using BigInt = boost::multiprecision::cpp_int;

// Exact balls-into-boxes arithmetic behind the detection-probability model.
// Counts overflow 64 bits almost immediately, so everything integral is done
// in arbitrary precision and only the final ratios become doubles.

// number of ways to throw `alpha` labelled balls into `eta` labelled boxes
// leaving no box empty (surjections); 0 when alpha < eta, 1 when both are 0
BigInt fn_count(uint32_t alpha, uint32_t eta);

BigInt binomial_coefficient(uint32_t n, uint32_t k);

// probability that throwing `alpha` balls into `eta` boxes occupies exactly
// `eta1` of them: C(eta, eta1) * FN(alpha, eta1) / eta^alpha
double prob_occupancy(uint32_t alpha, uint32_t eta, uint32_t eta1);

// binomial mass: P[alpha of `card` hosts pass a 2^-tau sampling gate]
double prob_sampled(uint64_t card, uint32_t tau, uint64_t alpha);

// probability that a rough estimator over `eta` slots with gate threshold
// `tau` ends up with exactly `eta1` slots set after scanning `card` distinct
// hosts — the sampling mixture over the occupancy law
double prob_weight_eq(uint64_t card, uint32_t eta, uint32_t tau, uint32_t eta1);

// tail: probability the estimator weight reaches at least n
double prob_weight_ge(uint64_t card, uint32_t eta, uint32_t tau, uint32_t n);

}  // namespace slidecard
