#include "slidecard/config.hpp"

#include <string_view>

#include "slidecard/errors.hpp"
#include "slidecard/io_util.hpp"

namespace slidecard {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void SketchParams::validate() const {
  if (q < 1 || q > 30) throw ConfigError("q must be in [1, 30]");
  if (q_prime < 1 || q_prime > 30) throw ConfigError("q_prime must be in [1, 30]");
  if (r < 3 || r > 64) throw ConfigError("r must be in [3, 64]");
  if (r_prime < 1 || r_prime > 64) throw ConfigError("r_prime must be in [1, 64]");
  if (delta < 1 || delta >= q) throw ConfigError("delta must satisfy 1 <= delta < q");
  if (static_cast<uint64_t>(r - 2) * delta + q < 32)
    throw ConfigError("(r-2)*delta + q must be at least 32 to cover the address bits");
  if (eta < 1 || eta > 65535) throw ConfigError("eta must be in [1, 65535]");
  if (eta_prime < 2 || eta_prime > (uint32_t{1} << 26))
    throw ConfigError("eta_prime must be in [2, 2^26]");
  if (delta_prime < 1 || delta_prime > eta_prime)
    throw ConfigError("delta_prime must satisfy 1 <= delta_prime <= eta_prime");
  if (theta < eta) throw ConfigError("theta must be at least eta");
  if (sampling_threshold(theta, eta) > 32)
    throw ConfigError("theta/eta ratio pushes the sampling threshold past 32 bits");

  const uint64_t rough = (uint64_t{1} << q) * r * eta;
  const uint64_t linear =
      ((uint64_t{1} << q_prime) * delta_prime + eta_prime - delta_prime) * r_prime;
  if (rough > (uint64_t{1} << 31) || linear > (uint64_t{1} << 31))
    throw ConfigError("parameter set needs more than 2^31 counters; reduce q or q_prime");
}

uint32_t SketchParams::tau() const { return sampling_threshold(theta, eta); }

HashSeeds SketchParams::seeds() const { return HashSeeds::derive(seed, r_prime); }

RsraConfig SketchParams::rsra_config() const {
  const HashSeeds s = seeds();
  RsraConfig cfg;
  cfg.q = q;
  cfg.r = r;
  cfg.delta = delta;
  cfg.eta = eta;
  cfg.tau = tau();
  cfg.seed_h1 = s.h1;
  cfg.seed_h2 = s.h2;
  cfg.seed_rhfg0 = s.rhfg0;
  return cfg;
}

SleaConfig SketchParams::slea_config() const {
  const HashSeeds s = seeds();
  SleaConfig cfg;
  cfg.q = q_prime;
  cfg.r = r_prime;
  cfg.delta = delta_prime;
  cfg.eta = eta_prime;
  cfg.seed_h3 = s.h3;
  cfg.seeds_lh = s.lh;
  return cfg;
}

SketchParams SketchParams::parse(const std::string& text) {
  SketchParams p;
  size_t pos = 0;
  uint64_t lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    ++lineno;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("parameter file line " + std::to_string(lineno) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    try {
      if (key == "q") p.q = static_cast<uint32_t>(std::stoul(value));
      else if (key == "r") p.r = static_cast<uint32_t>(std::stoul(value));
      else if (key == "delta") p.delta = static_cast<uint32_t>(std::stoul(value));
      else if (key == "eta") p.eta = static_cast<uint32_t>(std::stoul(value));
      else if (key == "q_prime") p.q_prime = static_cast<uint32_t>(std::stoul(value));
      else if (key == "r_prime") p.r_prime = static_cast<uint32_t>(std::stoul(value));
      else if (key == "delta_prime") p.delta_prime = static_cast<uint32_t>(std::stoul(value));
      else if (key == "eta_prime") p.eta_prime = static_cast<uint32_t>(std::stoul(value));
      else if (key == "theta") p.theta = std::stoull(value);
      else if (key == "seed") p.seed = std::stoull(value);
      else throw ConfigError("parameter file: unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("parameter file line " + std::to_string(lineno) + ": bad value for '" +
                        key + "'");
    }
  }
  return p;
}

SketchParams SketchParams::load_file(const std::string& path) {
  return parse(read_file(path));
}

}  // namespace slidecard
