#include "tamed_sde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tamed_sde {

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& data) {
  return pairwise_sum(data.data(), data.size());
}

namespace {

struct MeanVar {
  double mean = 0.0;
  double se_mean = 0.0;  // sd / sqrt(n)
};

MeanVar mean_and_se(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  MeanVar out;
  out.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return out;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  out.se_mean = std::sqrt(var / n);
  return out;
}

}  // namespace

ErrorStat strong_error(const Mat& reference, const Mat& approx) {
  if (reference.rows() != approx.rows() || reference.cols() != approx.cols())
    throw std::invalid_argument("strong_error: shape mismatch");
  if (reference.rows() == 0) throw std::invalid_argument("strong_error: empty ensembles");

  std::vector<double> sq;
  sq.reserve(static_cast<std::size_t>(reference.rows()));
  std::int64_t excluded = 0;
  for (Eigen::Index i = 0; i < reference.rows(); ++i) {
    if (!reference.row(i).allFinite() || !approx.row(i).allFinite()) {
      ++excluded;
      continue;
    }
    sq.push_back((reference.row(i) - approx.row(i)).squaredNorm());
  }
  if (sq.empty()) throw std::invalid_argument("strong_error: no usable pairs");

  const MeanVar mv = mean_and_se(sq);
  ErrorStat out;
  out.value = std::sqrt(mv.mean);
  out.stderr_ = out.value > 0.0 ? mv.se_mean / (2.0 * out.value) : 0.0;
  out.used = static_cast<std::int64_t>(sq.size());
  out.excluded = excluded;
  return out;
}

ErrorStat weak_error(const Mat& reference, const Mat& approx,
                     const std::function<double(const Vec&)>& f) {
  if (reference.rows() != approx.rows() || reference.cols() != approx.cols())
    throw std::invalid_argument("weak_error: shape mismatch");
  if (reference.rows() == 0) throw std::invalid_argument("weak_error: empty ensembles");
  if (!f) throw std::invalid_argument("weak_error: missing test function");

  std::vector<double> diff;
  diff.reserve(static_cast<std::size_t>(reference.rows()));
  std::int64_t excluded = 0;
  for (Eigen::Index i = 0; i < reference.rows(); ++i) {
    if (!reference.row(i).allFinite() || !approx.row(i).allFinite()) {
      ++excluded;
      continue;
    }
    const double d = f(reference.row(i).transpose()) - f(approx.row(i).transpose());
    if (!std::isfinite(d)) {
      ++excluded;
      continue;
    }
    diff.push_back(d);
  }
  if (diff.empty()) throw std::invalid_argument("weak_error: no usable pairs");

  const MeanVar mv = mean_and_se(diff);
  ErrorStat out;
  out.value = std::abs(mv.mean);
  out.stderr_ = mv.se_mean;
  out.used = static_cast<std::int64_t>(diff.size());
  out.excluded = excluded;
  return out;
}

OrderReport fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw std::invalid_argument("fit_order: length mismatch");
  std::vector<double> x, y;
  std::int64_t excluded = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i]))
      throw std::invalid_argument("fit_order: step sizes must be positive and finite");
    if (!(err[i] > 0.0) || !std::isfinite(err[i])) {
      ++excluded;
      continue;
    }
    x.push_back(std::log2(h[i]));
    y.push_back(std::log2(err[i]));
  }
  if (x.size() < 3)
    throw std::invalid_argument("fit_order: need at least 3 rows with positive errors");

  const auto n = static_cast<double>(x.size());
  const double xbar = pairwise_sum(x) / n;
  const double ybar = pairwise_sum(y) / n;
  std::vector<double> sxy(x.size()), sxx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy[i] = (x[i] - xbar) * (y[i] - ybar);
    sxx[i] = (x[i] - xbar) * (x[i] - xbar);
  }
  const double den = pairwise_sum(sxx);
  if (den == 0.0) throw std::invalid_argument("fit_order: step sizes are all equal");

  OrderReport rep;
  rep.slope = pairwise_sum(sxy) / den;
  rep.intercept = ybar - rep.slope * xbar;
  std::vector<double> res2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (rep.intercept + rep.slope * x[i]);
    res2[i] = r * r;
  }
  rep.residual = std::sqrt(pairwise_sum(res2) / n);
  rep.h_min = *std::min_element(h.begin(), h.end());
  rep.h_max = *std::max_element(h.begin(), h.end());
  rep.excluded_rows = excluded;
  return rep;
}

namespace {

std::int64_t checked_steps(double h, double T) {
  if (!(h > 0.0) || !(T > 0.0)) throw std::invalid_argument("need h > 0 and T > 0");
  const auto steps = static_cast<std::int64_t>(std::llround(T / h));
  if (steps < 1 || std::abs(static_cast<double>(steps) * h - T) > 1e-9 * T)
    throw std::invalid_argument("horizon must be an integer number of steps");
  return steps;
}

}  // namespace

TamingProbe taming_probe(const SdeProblem& problem, const TamingConfig& cfg, double h, int paths,
                         double T, const SeedSpec& seed) {
  cfg.validate();
  if (paths < 1) throw std::invalid_argument("taming_probe: need at least one path");
  const std::int64_t steps = checked_steps(h, T);

  const double scale = cfg.gamma * std::pow(h, cfg.alpha);
  const double noise_scale = std::sqrt(h);
  std::int64_t total_steps = 0;
  std::int64_t active_steps = 0;
  double gap_sum = 0.0;
  std::vector<double> z(static_cast<std::size_t>(problem.noise_dim));

  for (int p = 0; p < paths; ++p) {
    const rng::Stream g{seed.master_seed, rng::Draw::lattice_gaussian,
                        static_cast<std::uint64_t>(p), 0, 0};
    Vec x = problem.x0;
    for (std::int64_t i = 0; i < steps; ++i) {
      if (!x.allFinite()) break;
      const double t = h * static_cast<double>(i);
      const Vec b = problem.drift.full(t, x);
      if (!b.allFinite()) break;
      const double psi = cutoff_psi(scale * b.norm());
      ++total_steps;
      Vec b_eff = b;
      if (psi > 0.0) {
        ++active_steps;
        b_eff = b / (1.0 + psi);
        const double factor = psi / (1.0 + psi);
        gap_sum += factor * factor * b.squaredNorm();
      }
      rng::normals(g, static_cast<std::uint64_t>(i), z.data(), problem.noise_dim);
      Vec dW(problem.noise_dim);
      for (int j = 0; j < problem.noise_dim; ++j) dW[j] = noise_scale * z[static_cast<std::size_t>(j)];
      const Mat s = problem.diffusion.sigma(t, x);
      x = Vec(x + h * b_eff + s * dW);
    }
  }
  if (total_steps == 0) throw std::runtime_error("taming_probe: no steps executed");

  TamingProbe out;
  out.active_fraction = static_cast<double>(active_steps) / static_cast<double>(total_steps);
  out.mean_sq_gap = gap_sum / static_cast<double>(total_steps);
  return out;
}

Trajectories simulate_trajectories(SchemeId scheme, const SdeProblem& problem,
                                   const TamingConfig& cfg, double h, int paths, double T,
                                   const SeedSpec& seed) {
  cfg.validate();
  if (paths < 1) throw std::invalid_argument("simulate_trajectories: need at least one path");
  const std::int64_t steps = checked_steps(h, T);
  const int n_components =
      problem.drift.has_batch() ? static_cast<int>(problem.drift.components.size()) : 0;
  if (scheme_uses_batch(scheme) && n_components == 0)
    throw std::invalid_argument("simulate_trajectories: batch scheme without components");

  Trajectories out;
  out.h = h;
  out.steps = steps;
  out.paths.reserve(static_cast<std::size_t>(paths));
  const double noise_scale = std::sqrt(h);
  std::vector<double> z(static_cast<std::size_t>(problem.noise_dim));

  for (int p = 0; p < paths; ++p) {
    const rng::Stream g{seed.master_seed, rng::Draw::lattice_gaussian,
                        static_cast<std::uint64_t>(p), 0, 0};
    const rng::Stream bi{seed.master_seed, rng::Draw::batch_index,
                         static_cast<std::uint64_t>(p), 0,
                         static_cast<std::uint32_t>(scheme)};
    Mat traj(steps + 1, problem.dim);
    Vec x = problem.x0;
    traj.row(0) = x.transpose();
    for (std::int64_t i = 0; i < steps; ++i) {
      if (x.allFinite()) {
        StepInput in;
        in.t = h * static_cast<double>(i);
        in.x = x;
        in.h = h;
        rng::normals(g, static_cast<std::uint64_t>(i), z.data(), problem.noise_dim);
        in.dW.resize(problem.noise_dim);
        for (int j = 0; j < problem.noise_dim; ++j)
          in.dW[j] = noise_scale * z[static_cast<std::size_t>(j)];
        if (scheme_uses_batch(scheme))
          in.xi = rng::index_draw(bi, static_cast<std::uint64_t>(i), n_components);
        x = step(scheme, problem, cfg, in);
      }
      traj.row(i + 1) = x.transpose();
    }
    out.paths.push_back(std::move(traj));
  }
  return out;
}

MomentTrack moment_track(const Trajectories& trajectories, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("moment_track: need exponent p >= 1");
  if (trajectories.paths.empty()) throw std::invalid_argument("moment_track: empty ensemble");

  MomentTrack out;
  bool any_time = false;
  std::vector<double> vals;
  for (std::int64_t t = 0; t <= trajectories.steps; ++t) {
    vals.clear();
    for (const Mat& traj : trajectories.paths) {
      if (!traj.row(t).allFinite()) {
        ++out.nonfinite_states;
        continue;
      }
      vals.push_back(std::pow(traj.row(t).norm(), p));
    }
    if (vals.empty()) continue;
    const double m = pairwise_sum(vals) / static_cast<double>(vals.size());
    if (!any_time || m > out.max_moment) out.max_moment = m;
    any_time = true;
  }
  if (!any_time) throw std::runtime_error("moment_track: no finite states");
  return out;
}

std::vector<ErrorRow> error_table(const EnsembleResult& ensemble,
                                  const std::vector<std::string>& fnames) {
  // Iterate levels from coarse to fine so h is strictly decreasing per scheme.
  std::vector<std::size_t> order(ensemble.levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ensemble.levels[a] < ensemble.levels[b]; });

  std::vector<ErrorRow> rows;
  for (std::size_t si = 0; si < ensemble.schemes.size(); ++si) {
    for (std::size_t oi : order) {
      const ErrorStat strong = strong_error(ensemble.reference, ensemble.terminals[si][oi]);
      const auto& agg = ensemble.stats[si][oi];
      ErrorRow base;
      base.scheme = scheme_name(ensemble.schemes[si]);
      base.h = ensemble.level_h(oi);
      base.strong_rmse = strong.value;
      base.strong_stderr = strong.stderr_;
      base.taming_active_fraction =
          agg.steps > 0 ? static_cast<double>(agg.taming_active) / static_cast<double>(agg.steps)
                        : 0.0;
      base.diverged = agg.diverged;
      if (fnames.empty()) {
        rows.push_back(base);
        continue;
      }
      for (const std::string& fname : fnames) {
        ErrorRow row = base;
        row.fname = fname;
        const ErrorStat weak =
            weak_error(ensemble.reference, ensemble.terminals[si][oi],
                       [&fname](const Vec& x) { return test_function(fname, x); });
        row.weak_err = weak.value;
        row.weak_stderr = weak.stderr_;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<OrderReport> order_reports(const std::vector<ErrorRow>& rows) {
  std::vector<std::string> schemes;
  for (const auto& r : rows)
    if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
      schemes.push_back(r.scheme);

  std::vector<OrderReport> reports;
  for (const auto& scheme : schemes) {
    std::vector<double> h_strong, strong;
    std::vector<std::string> fnames;
    for (const auto& r : rows) {
      if (r.scheme != scheme) continue;
      if (h_strong.empty() || h_strong.back() != r.h) {
        h_strong.push_back(r.h);
        strong.push_back(r.strong_rmse);
      }
      if (!r.fname.empty() &&
          std::find(fnames.begin(), fnames.end(), r.fname) == fnames.end())
        fnames.push_back(r.fname);
    }
    OrderReport rep = fit_order(h_strong, strong);
    rep.scheme = scheme;
    rep.error_kind = "strong";
    reports.push_back(rep);

    for (const auto& fname : fnames) {
      std::vector<double> h_weak, weak;
      for (const auto& r : rows) {
        if (r.scheme != scheme || r.fname != fname) continue;
        h_weak.push_back(r.h);
        weak.push_back(r.weak_err);
      }
      OrderReport wrep = fit_order(h_weak, weak);
      wrep.scheme = scheme;
      wrep.error_kind = "weak";
      wrep.fname = fname;
      reports.push_back(wrep);
    }
  }
  return reports;
}

}  // namespace tamed_sde
