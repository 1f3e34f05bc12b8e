#ifndef TAMED_SDE_CONFIG_HPP
#define TAMED_SDE_CONFIG_HPP

// Strict declarative experiment configs. Sections and keys outside the
// documented set are rejected, every accepted config round-trips through
// serialize/parse to an equal value, and all missing required keys are
// reported in a single error.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tamed_sde/taming.hpp"

namespace tamed_sde {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonteCarloConfig {
  int k_ref = 13;
  std::vector<int> levels = {5, 6, 7, 8, 9};  // level l runs at h = T 2^-l
  int paths = 1000;
  double horizon = 1.0;

  bool operator==(const MonteCarloConfig&) const = default;
};

struct SamplerFileConfig {
  double beta = 1.0;
  std::vector<double> h_list;
  std::int64_t n_steps = 100000;
  std::int64_t burn_in = 10000;
  std::int64_t thin = 1;
  int bins = 128;
  double range_lo = -4.0;
  double range_hi = 4.0;
  double lyapunov_delta = 0.05;
  int moment_k = 2;

  bool operator==(const SamplerFileConfig&) const = default;
};

struct ExperimentConfig {
  std::string kind;  // converge | sample | validate
  std::string problem;
  std::vector<std::string> schemes;
  std::vector<std::string> test_functions;
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  TamingConfig taming;
  MonteCarloConfig mc;
  SamplerFileConfig sampler;
  std::string out_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses and fully validates the INI-style config text; defaults applied
// (including per-dimension default test functions for converge runs).
ExperimentConfig parse_config(const std::string& text);

// Canonical text form; parse(serialize(cfg)) == cfg for any accepted cfg.
std::string serialize(const ExperimentConfig& cfg);

}  // namespace tamed_sde

#endif
