#ifndef TAMED_SDE_ANALYSIS_HPP
#define TAMED_SDE_ANALYSIS_HPP

// Error estimation and diagnostics on coupled ensembles.
//
// All reductions use fixed ascending-index pairwise summation so results are
// reproducible and well conditioned at large path counts.

#include <cstdint>
#include <string>
#include <vector>

#include "tamed_sde/montecarlo.hpp"
#include "tamed_sde/problems.hpp"

namespace tamed_sde {

// Pairwise (tree) sum over data[0..n) in ascending-index order; runs of at
// most 8 elements are summed left to right.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& data);

struct ErrorStat {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t used = 0;      // pairs entering the mean
  std::int64_t excluded = 0;  // pairs dropped for non-finite values
};

// Root-mean-square of |X_ref - X_hat| over coupled pairs; the stderr is the
// standard error of the mean squared difference pushed through the square
// root (delta method).
ErrorStat strong_error(const Mat& reference, const Mat& approx);

// |mean(f(X_ref) - f(X_hat))| with the sample standard error of the coupled
// differences.
ErrorStat weak_error(const Mat& reference, const Mat& approx,
                     const std::function<double(const Vec&)>& f);

struct OrderReport {
  std::string scheme;
  std::string error_kind;  // "strong" or "weak"
  std::string fname;       // empty for strong
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual of the fit
  double h_min = 0.0;
  double h_max = 0.0;
  std::int64_t excluded_rows = 0;  // zero/negative/non-finite errors dropped
};

// Ordinary least squares of log2(err) against log2(h); needs at least three
// usable rows after dropping non-positive errors.
OrderReport fit_order(const std::vector<double>& h, const std::vector<double>& err);

struct TamingProbe {
  double active_fraction = 0.0;  // fraction of steps with the cut-off engaged
  double mean_sq_gap = 0.0;      // mean |b - b_tamed|^2 along the path
};

// Runs modified-tamed-Euler paths at step h over [0, T] and measures how
// often and how strongly the taming bites.
TamingProbe taming_probe(const SdeProblem& problem, const TamingConfig& cfg, double h, int paths,
                         double T, const SeedSpec& seed);

struct Trajectories {
  double h = 0.0;
  std::int64_t steps = 0;
  std::vector<Mat> paths;  // each (steps + 1) x dim, row i = state at time i h
};

// Integrates full trajectories (every grid state stored); rows after a
// divergence hold the first non-finite state.
Trajectories simulate_trajectories(SchemeId scheme, const SdeProblem& problem,
                                   const TamingConfig& cfg, double h, int paths, double T,
                                   const SeedSpec& seed);

struct MomentTrack {
  double max_moment = 0.0;            // max over grid times of mean |X(t)|^p
  std::int64_t nonfinite_states = 0;  // states excluded from the means
};

MomentTrack moment_track(const Trajectories& trajectories, double p);

// One errors-table row; several rows share (scheme, h) when more than one
// observable is requested.
struct ErrorRow {
  std::string scheme;
  double h = 0.0;
  double strong_rmse = 0.0;
  double strong_stderr = 0.0;
  std::string fname;
  double weak_err = 0.0;
  double weak_stderr = 0.0;
  double taming_active_fraction = 0.0;
  std::int64_t diverged = 0;
};

std::vector<ErrorRow> error_table(const EnsembleResult& ensemble,
                                  const std::vector<std::string>& fnames);

std::vector<OrderReport> order_reports(const std::vector<ErrorRow>& rows);

}  // namespace tamed_sde

#endif
