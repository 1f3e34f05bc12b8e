#include "tamed_sde/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace tamed_sde {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

BrownianLattice make_lattice(const SeedSpec& seed, std::uint64_t path, int fine_level, double T,
                             int noise_dim) {
  if (fine_level < 0 || fine_level > 40)
    throw std::invalid_argument("make_lattice: fine level out of range");
  if (!(T > 0.0)) throw std::invalid_argument("make_lattice: need T > 0");
  if (noise_dim < 1) throw std::invalid_argument("make_lattice: need noise_dim >= 1");

  BrownianLattice lat;
  lat.fine_level = fine_level;
  lat.h_ref = std::ldexp(T, -fine_level);
  const std::int64_t n = std::int64_t{1} << fine_level;
  lat.increments.resize(n, noise_dim);

  // slot 0 is the shared Brownian stream: every scheme and level on this
  // path derives from these draws.
  const rng::Stream s{seed.master_seed, rng::Draw::lattice_gaussian, path, 0, 0};
  const double scale = std::sqrt(lat.h_ref);
  std::vector<double> z(static_cast<std::size_t>(noise_dim));
  for (std::int64_t i = 0; i < n; ++i) {
    rng::normals(s, static_cast<std::uint64_t>(i), z.data(), noise_dim);
    for (int j = 0; j < noise_dim; ++j) lat.increments(i, j) = scale * z[static_cast<std::size_t>(j)];
  }
  return lat;
}

Mat coarsen(const BrownianLattice& lattice, int m) {
  if (m < 0 || m > lattice.fine_level) throw std::invalid_argument("coarsen: level out of range");
  if (m == 0) return lattice.increments;
  const std::int64_t cell = std::int64_t{1} << m;
  const std::int64_t n_coarse = lattice.increments.rows() >> m;
  Mat out(n_coarse, lattice.increments.cols());
  for (std::int64_t j = 0; j < n_coarse; ++j) {
    Eigen::RowVectorXd acc = lattice.increments.row(j * cell);
    for (std::int64_t i = 1; i < cell; ++i) acc += lattice.increments.row(j * cell + i);
    out.row(j) = acc;
  }
  return out;
}

namespace {

void fill_batch_indices(const SeedSpec& seed, std::uint64_t path, int level, SchemeId scheme,
                        int n_components, std::vector<int>& out) {
  const rng::Stream s{seed.master_seed, rng::Draw::batch_index, path,
                      static_cast<std::uint32_t>(level), static_cast<std::uint32_t>(scheme)};
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = rng::index_draw(s, static_cast<std::uint64_t>(i), n_components);
}

}  // namespace

EnsembleResult simulate_coupled(const SdeProblem& problem, const std::vector<SchemeId>& schemes,
                                const TamingConfig& cfg, int k_ref,
                                const std::vector<int>& coarse_levels, int paths,
                                const SeedSpec& seed, int workers) {
  cfg.validate();
  if (paths < 1) throw std::invalid_argument("simulate_coupled: need at least one path");
  if (schemes.empty()) throw std::invalid_argument("simulate_coupled: empty scheme list");
  if (k_ref < 1 || k_ref > 30) throw std::invalid_argument("simulate_coupled: k_ref out of range");
  for (int l : coarse_levels)
    if (l < 0 || l >= k_ref)
      throw std::invalid_argument("simulate_coupled: coarse levels must be coarser than k_ref");
  for (SchemeId s : schemes)
    if (scheme_uses_batch(s) && !problem.drift.has_batch())
      throw std::invalid_argument("simulate_coupled: batch scheme on a drift without components");

  EnsembleResult res;
  res.seed = seed;
  res.paths = paths;
  res.k_ref = k_ref;
  res.horizon = problem.horizon;
  res.schemes = schemes;
  res.levels = coarse_levels;
  res.reference.resize(paths, problem.dim);
  res.terminals.assign(schemes.size(), std::vector<Mat>(coarse_levels.size()));
  for (auto& per_scheme : res.terminals)
    for (auto& m : per_scheme) m.resize(paths, problem.dim);

  const int n_workers = std::min(resolve_workers(workers), paths);
  const int chunk = (paths + n_workers - 1) / n_workers;
  const int n_components =
      problem.drift.has_batch() ? static_cast<int>(problem.drift.components.size()) : 0;

  // Per-worker stat partials, merged in fixed range order afterwards.
  std::vector<std::vector<std::vector<PathStatsAgg>>> partial_stats(
      static_cast<std::size_t>(n_workers),
      std::vector<std::vector<PathStatsAgg>>(schemes.size(),
                                             std::vector<PathStatsAgg>(coarse_levels.size())));
  std::vector<std::int64_t> partial_ref_diverged(static_cast<std::size_t>(n_workers), 0);

  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto work = [&](int w, int begin, int end) {
    try {
      auto& stats = partial_stats[static_cast<std::size_t>(w)];
      const TimeGrid fine_grid{std::ldexp(problem.horizon, -k_ref), std::int64_t{1} << k_ref};
      std::vector<int> xi;
      for (int p = begin; p < end; ++p) {
        const BrownianLattice lat =
            make_lattice(seed, static_cast<std::uint64_t>(p), k_ref, problem.horizon,
                         problem.noise_dim);

        PathStats ref_stats;
        res.reference.row(p) =
            integrate_path(SchemeId::mte, problem, cfg, fine_grid, lat.increments, nullptr,
                           &ref_stats)
                .transpose();
        if (ref_stats.diverged) ++partial_ref_diverged[static_cast<std::size_t>(w)];

        for (std::size_t l = 0; l < coarse_levels.size(); ++l) {
          const int level = coarse_levels[l];
          const Mat coarse = coarsen(lat, k_ref - level);
          const TimeGrid grid{std::ldexp(problem.horizon, -level), std::int64_t{1} << level};
          for (std::size_t si = 0; si < schemes.size(); ++si) {
            const int* xi_ptr = nullptr;
            if (scheme_uses_batch(schemes[si])) {
              xi.resize(static_cast<std::size_t>(grid.steps));
              fill_batch_indices(seed, static_cast<std::uint64_t>(p), level, schemes[si],
                                 n_components, xi);
              xi_ptr = xi.data();
            }
            PathStats ps;
            res.terminals[si][l].row(p) =
                integrate_path(schemes[si], problem, cfg, grid, coarse, xi_ptr, &ps).transpose();
            auto& agg = stats[si][l];
            agg.steps += ps.steps;
            agg.taming_active += ps.taming_active;
            if (ps.diverged) ++agg.diverged;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_workers == 1) {
    work(0, 0, paths);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(paths, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, w, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  res.stats.assign(schemes.size(), std::vector<PathStatsAgg>(coarse_levels.size()));
  for (int w = 0; w < n_workers; ++w) {
    res.reference_diverged += partial_ref_diverged[static_cast<std::size_t>(w)];
    for (std::size_t si = 0; si < schemes.size(); ++si)
      for (std::size_t l = 0; l < coarse_levels.size(); ++l) {
        const auto& part = partial_stats[static_cast<std::size_t>(w)][si][l];
        auto& agg = res.stats[si][l];
        agg.steps += part.steps;
        agg.taming_active += part.taming_active;
        agg.diverged += part.diverged;
      }
  }
  return res;
}

}  // namespace tamed_sde
