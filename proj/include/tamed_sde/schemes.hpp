#ifndef TAMED_SDE_SCHEMES_HPP
#define TAMED_SDE_SCHEMES_HPP

// One-step integrator kernels and the grid fold. All explicit schemes share
// one update expression, x + h b_eff + sigma dW, differing only in how b_eff
// is produced; that makes the below-threshold equivalences (mte vs
// euler_maruyama, modified_tamed_milstein vs mte on additive noise) hold
// bit-for-bit rather than approximately.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "tamed_sde/problems.hpp"
#include "tamed_sde/taming.hpp"

namespace tamed_sde {

enum class SchemeId : int {
  euler_maruyama = 1,
  tamed_euler = 2,
  mte = 3,      // modified tamed Euler
  mte_rbm = 4,  // modified tamed Euler with per-step random batch drift
  milstein = 5,
  modified_tamed_milstein = 6,
  truncated_euler = 7,
};

const std::vector<std::string>& scheme_names();
std::string scheme_name(SchemeId id);
SchemeId parse_scheme(const std::string& name);
bool scheme_uses_batch(SchemeId id);

struct TimeGrid {
  double h = 0.0;
  std::int64_t steps = 0;
  double t0 = 0.0;

  double time(std::int64_t i) const { return t0 + h * static_cast<double>(i); }
};

struct StepInput {
  double t = 0.0;
  Vec x;
  double h = 0.0;
  Vec dW;
  int xi = -1;  // batch index; < 0 means absent
};

// Next state after one step. Coefficients are evaluated at (t, x), the left
// grid point. Milstein-family schemes add the diagonal correction
// 0.5 sigma_ii dsigma_ii (dW_i^2 - h); on additive noise the correction is
// skipped outright, and multiplicative noise requires sigma_grad with
// noise_dim == dim (diagonal structure), otherwise an error is raised.
Vec step(SchemeId scheme, const SdeProblem& problem, const TamingConfig& cfg,
         const StepInput& input);

struct PathStats {
  std::int64_t steps = 0;          // steps actually executed
  std::int64_t taming_active = 0;  // steps where the drift transform engaged
  bool diverged = false;           // non-finite state encountered
};

// Folds step over the grid from problem.x0 and returns the terminal state.
// increments has one row per step (grid.steps x noise_dim); xi_stream must
// supply one index per step for batch schemes and is ignored otherwise.
// A non-finite state stops the fold early and marks the path diverged; the
// non-finite state is returned so callers can account for it.
Vec integrate_path(SchemeId scheme, const SdeProblem& problem, const TamingConfig& cfg,
                   const TimeGrid& grid, const Mat& increments,
                   const int* xi_stream = nullptr, PathStats* stats = nullptr);

}  // namespace tamed_sde

#endif
