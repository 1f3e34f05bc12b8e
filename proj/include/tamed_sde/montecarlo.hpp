#ifndef TAMED_SDE_MONTECARLO_HPP
#define TAMED_SDE_MONTECARLO_HPP

// Coupled Brownian lattices and the parallel ensemble driver.
//
// Every scheme and every step size sees the same Brownian path: increments
// live on a fine dyadic lattice (level K, step T 2^-K) and coarser grids use
// exact left-to-right sums of the fine increments within each coarse cell.
// All randomness is counter-addressed (see rng.hpp), so results are
// byte-identical for any worker count.

#include <cstdint>
#include <vector>

#include "tamed_sde/problems.hpp"
#include "tamed_sde/rng.hpp"
#include "tamed_sde/schemes.hpp"
#include "tamed_sde/taming.hpp"

namespace tamed_sde {

struct SeedSpec {
  std::uint64_t master_seed = 0;

  bool operator==(const SeedSpec&) const = default;
};

// One path's fine increments: 2^fine_level rows, noise_dim columns, each
// entry N(0, h_ref) with h_ref = T 2^-fine_level.
struct BrownianLattice {
  int fine_level = 0;
  double h_ref = 0.0;
  Mat increments;
};

BrownianLattice make_lattice(const SeedSpec& seed, std::uint64_t path, int fine_level, double T,
                             int noise_dim);

// Aggregates 2^m fine increments per coarse cell, summed left to right in
// fine order; m = 0 returns the fine increments unchanged.
Mat coarsen(const BrownianLattice& lattice, int m);

struct PathStatsAgg {
  std::int64_t steps = 0;
  std::int64_t taming_active = 0;
  std::int64_t diverged = 0;
};

struct EnsembleResult {
  SeedSpec seed;
  int paths = 0;
  int k_ref = 0;
  double horizon = 0.0;
  std::vector<SchemeId> schemes;
  std::vector<int> levels;  // dyadic levels; level l runs at h = T 2^-l
  Mat reference;            // paths x dim, terminal states of mte at the fine level
  std::int64_t reference_diverged = 0;
  // terminals[s][l]: paths x dim for schemes[s] at levels[l]
  std::vector<std::vector<Mat>> terminals;
  std::vector<std::vector<PathStatsAgg>> stats;

  double level_h(std::size_t l) const { return std::ldexp(horizon, -levels[l]); }
};

// Runs the reference scheme (mte at the fine level) plus every requested
// scheme at every coarse level on the same lattice, per path. workers = 0
// means the hardware concurrency; output does not depend on the choice.
EnsembleResult simulate_coupled(const SdeProblem& problem, const std::vector<SchemeId>& schemes,
                                const TamingConfig& cfg, int k_ref,
                                const std::vector<int>& coarse_levels, int paths,
                                const SeedSpec& seed, int workers = 0);

// The worker count actually used for a requested value (0 -> hardware).
int resolve_workers(int requested);

}  // namespace tamed_sde

#endif
