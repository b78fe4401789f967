#include "slidecard/occupancy.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace slidecard {

namespace {

// beyond this the exact big-integer route is replaced by the equivalent
// occupancy chain in doubles (no cancellation, so it stays accurate while the
// integer counts would grow into megabytes)
constexpr uint64_t kExactAlphaLimit = 600;

class FnTable {
 public:
  BigInt get(uint32_t alpha, uint32_t eta) {
    std::lock_guard<std::mutex> lock(mu_);
    return compute(alpha, eta);
  }

 private:
  const BigInt& compute(uint32_t alpha, uint32_t eta) {
    if (eta >= memo_.size()) memo_.resize(eta + 1);
    auto& row = memo_[eta];
    if (alpha < row.size()) return row[alpha];
    const size_t from = row.size();
    row.resize(static_cast<size_t>(alpha) + 1);
    for (size_t a = from; a <= alpha; ++a) {
      BigInt& out = memo_[eta][a];
      if (eta == 0) {
        out = (a == 0) ? 1 : 0;
      } else if (a < eta) {
        out = 0;
      } else if (eta == 1) {
        out = 1;
      } else {
        BigInt total = boost::multiprecision::pow(BigInt(eta), static_cast<unsigned>(a));
        for (uint32_t i = 1; i < eta; ++i)
          total -= binomial_coefficient(eta, i) * compute(static_cast<uint32_t>(a), i);
        out = total;
      }
    }
    return memo_[eta][alpha];
  }

  std::mutex mu_;
  std::vector<std::vector<BigInt>> memo_;
};

FnTable& fn_table() {
  static FnTable table;
  return table;
}

// num / den as a double; operands may be thousands of bits wide, so align
// them below the double range first (relative error ~2^-400 at worst)
double big_ratio(const BigInt& num, const BigInt& den) {
  if (num.is_zero()) return 0.0;
  const long nb = static_cast<long>(boost::multiprecision::msb(num));
  const long db = static_cast<long>(boost::multiprecision::msb(den));
  const long drop = std::max({nb, db, long{500}}) - 500;
  const double n = (drop > 0 ? BigInt(num >> drop) : num).convert_to<double>();
  const double d = (drop > 0 ? BigInt(den >> drop) : den).convert_to<double>();
  return n / d;
}

// one more ball thrown uniformly into eta boxes; p[j] = P[j boxes occupied].
// Every term is non-negative, so the update never cancels.
void occupancy_step(std::vector<double>& p, uint32_t eta) {
  const double inv = 1.0 / static_cast<double>(eta);
  for (uint32_t j = eta; j >= 1; --j)
    p[j] = p[j] * (static_cast<double>(j) * inv) +
           p[j - 1] * (static_cast<double>(eta - j + 1) * inv);
  p[0] = 0.0;
}

}  // namespace

BigInt binomial_coefficient(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (uint32_t i = 0; i < k; ++i) {
    out *= (n - i);
    out /= (i + 1);
  }
  return out;
}

BigInt fn_count(uint32_t alpha, uint32_t eta) { return fn_table().get(alpha, eta); }

double prob_occupancy(uint32_t alpha, uint32_t eta, uint32_t eta1) {
  if (eta == 0 || eta1 > eta) throw std::invalid_argument("prob_occupancy: need eta1 <= eta, eta > 0");
  if (alpha <= kExactAlphaLimit) {
    const BigInt num = binomial_coefficient(eta, eta1) * fn_count(alpha, eta1);
    const BigInt den = boost::multiprecision::pow(BigInt(eta), alpha);
    return big_ratio(num, den);
  }
  std::vector<double> p(eta + 1, 0.0);
  p[0] = 1.0;
  for (uint32_t a = 1; a <= alpha; ++a) occupancy_step(p, eta);
  return p[eta1];
}

double prob_sampled(uint64_t card, uint32_t tau, uint64_t alpha) {
  if (alpha > card) return 0.0;
  if (tau == 0) return alpha == card ? 1.0 : 0.0;
  const double n = static_cast<double>(card);
  const double a = static_cast<double>(alpha);
  const double log_p = -static_cast<double>(tau) * std::log(2.0);
  const double log_1p = std::log1p(-std::exp2(-static_cast<double>(tau)));
  const double log_mass = std::lgamma(n + 1.0) - std::lgamma(a + 1.0) -
                          std::lgamma(n - a + 1.0) + a * log_p + (n - a) * log_1p;
  return std::exp(log_mass);
}

double prob_weight_eq(uint64_t card, uint32_t eta, uint32_t tau, uint32_t eta1) {
  if (eta == 0 || eta1 > eta) throw std::invalid_argument("prob_weight_eq: need eta1 <= eta, eta > 0");
  if (card <= kExactAlphaLimit) {
    double total = 0.0;
    for (uint64_t alpha = 0; alpha <= card; ++alpha) {
      const double mass = prob_sampled(card, tau, alpha);
      if (mass < 1e-18) continue;  // skipped tail is < card * 1e-18
      total += mass * prob_occupancy(static_cast<uint32_t>(alpha), eta, eta1);
    }
    return total;
  }
  // large streams: advance the occupancy chain once, folding in the sampling
  // mass at every count
  std::vector<double> p(eta + 1, 0.0);
  p[0] = 1.0;
  double total = prob_sampled(card, tau, 0) * (eta1 == 0 ? 1.0 : 0.0);
  for (uint64_t a = 1; a <= card; ++a) {
    occupancy_step(p, eta);
    const double mass = prob_sampled(card, tau, a);
    if (mass > 0.0) total += mass * p[eta1];
  }
  return total;
}

double prob_weight_ge(uint64_t card, uint32_t eta, uint32_t tau, uint32_t n) {
  if (n > eta) return 0.0;
  double total = 0.0;
  for (uint32_t eta1 = n; eta1 <= eta; ++eta1) total += prob_weight_eq(card, eta, tau, eta1);
  return total;
}

}  // namespace slidecard
