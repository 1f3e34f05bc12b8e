#ifndef TAMED_SDE_RUN_HPP
#define TAMED_SDE_RUN_HPP

// Experiment drivers behind the CLI subcommands. Each writes its CSV outputs
// plus a manifest (tool version, duration, per-file checksums, config echo)
// into the configured output directory and returns the in-memory results.

#include <string>
#include <utility>
#include <vector>

#include "tamed_sde/analysis.hpp"
#include "tamed_sde/config.hpp"
#include "tamed_sde/sampler.hpp"

namespace tamed_sde {

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConvergeOutput {
  std::vector<ErrorRow> rows;
  std::vector<OrderReport> orders;
  std::string errors_path;
  std::string orders_path;
  std::string manifest_path;
};

// Coupled ensemble run: writes errors.csv, orders.csv, manifest.txt.
// A diverged reference path aborts with a RunError.
ConvergeOutput run_converge(const ExperimentConfig& cfg);

struct SampleHResult {
  double h = 0.0;
  bool diverged = false;
  std::int64_t n_samples = 0;
  int moment_k = 2;
  double moment = 0.0;
  double moment_stderr = 0.0;
  double kl = 0.0;
  bool metrics_valid = false;  // false when the chain diverged too early
};

struct SampleOutput {
  std::vector<SampleHResult> results;
  std::string samples_path;
  std::string metrics_path;
  std::string manifest_path;
};

// One chain per configured step size against the problem's Gibbs target:
// writes samples.csv, metrics.csv, manifest.txt. Diverged chains are
// reported in their metrics row; the run continues.
SampleOutput run_sample(const ExperimentConfig& cfg);

struct ValidateOutput {
  std::vector<std::pair<std::string, bool>> checks;
  bool all_pass = false;
  std::string validate_path;
  std::string manifest_path;
};

// Invariant suite over the taming, scheme, and ensemble layers: writes
// validate.csv, manifest.txt.
ValidateOutput run_validate(const ExperimentConfig& cfg);

}  // namespace tamed_sde

#endif
