#include "tamed_sde/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "tamed_sde/analysis.hpp"
#include "tamed_sde/rng.hpp"

namespace tamed_sde {

void SamplerConfig::validate() const {
  taming.validate();
  if (!drift.full) throw std::invalid_argument("sampler: missing force field");
  if (dim < 1) throw std::invalid_argument("sampler: need dim >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("sampler: beta must be positive and finite");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("sampler: h must be positive and finite");
  if (n_steps < 0 || burn_in < 0 || burn_in > n_steps)
    throw std::invalid_argument("sampler: need 0 <= burn_in <= n_steps");
  if (thin < 1) throw std::invalid_argument("sampler: need thin >= 1");
  if (!(lyapunov_delta > 0.0))
    throw std::invalid_argument("sampler: need lyapunov_delta > 0");
  if (x0.size() != 0 && x0.size() != dim)
    throw std::invalid_argument("sampler: x0 dimension mismatch");
}

namespace {

// Shared by tsgld_step and run_chain so a folded chain is bit-identical to
// stepping by hand.
Vec tsgld_step_scaled(const Vec& x, const SamplerConfig& cfg, int xi, const Vec& zeta,
                      double tame_scale, double noise_scale) {
  Vec b;
  if (xi >= 0 && cfg.drift.has_batch()) {
    const BatchSampler sampler =
        BatchSampler::uniform(static_cast<int>(cfg.drift.components.size()));
    b = batch_drift(cfg.drift, sampler, xi, 0.0, x);
  } else {
    b = cfg.drift.full(0.0, x);
  }
  Vec b_eff = b;
  if (b.allFinite()) b_eff = detail::tame_modified_scaled(b, tame_scale);
  return Vec(x + cfg.h * b_eff + noise_scale * zeta);
}

}  // namespace

Vec tsgld_step(const Vec& x, const SamplerConfig& cfg, int xi, const Vec& zeta) {
  cfg.validate();
  if (!x.allFinite() || !zeta.allFinite())
    throw std::invalid_argument("tsgld_step: non-finite input");
  if (x.size() != cfg.dim || zeta.size() != cfg.dim)
    throw std::invalid_argument("tsgld_step: dimension mismatch");
  const double tame_scale = cfg.taming.gamma * std::pow(cfg.h, cfg.taming.alpha);
  const double noise_scale = std::sqrt((2.0 / cfg.beta) * cfg.h);
  return tsgld_step_scaled(x, cfg, xi, zeta, tame_scale, noise_scale);
}

double lyapunov(const Vec& x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lyapunov: need delta > 0");
  return std::exp(delta * std::sqrt(1.0 + x.squaredNorm()));
}

Chain run_chain(const SamplerConfig& cfg) {
  cfg.validate();
  constexpr std::int64_t kCheckpointEvery = 1000;
  constexpr double kDivergenceRadius = 1e10;

  const double tame_scale = cfg.taming.gamma * std::pow(cfg.h, cfg.taming.alpha);
  const double noise_scale = std::sqrt((2.0 / cfg.beta) * cfg.h);
  const bool batched = cfg.drift.has_batch();
  const int n_components = batched ? static_cast<int>(cfg.drift.components.size()) : 0;

  const rng::Stream gauss{cfg.seed.master_seed, rng::Draw::chain_gaussian, cfg.chain_index, 0, 0};
  const rng::Stream batch{cfg.seed.master_seed, rng::Draw::chain_batch, cfg.chain_index, 0, 0};

  Chain chain;
  Vec x = cfg.x0.size() ? cfg.x0 : Vec(Vec::Zero(cfg.dim));
  const bool single_sample = cfg.burn_in == cfg.n_steps;

  double lyap_sum = 0.0;
  double max_abs = x.norm();
  Vec zeta(cfg.dim);
  std::vector<double> z(static_cast<std::size_t>(cfg.dim));

  auto retain = [&](std::int64_t i, const Vec& state) {
    if (single_sample) return;  // handled after the loop
    if (i <= cfg.burn_in) return;
    if ((i - cfg.burn_in) % cfg.thin == 0) chain.samples.push_back(state);
  };

  for (std::int64_t i = 1; i <= cfg.n_steps; ++i) {
    rng::normals(gauss, static_cast<std::uint64_t>(i - 1), z.data(), cfg.dim);
    for (int j = 0; j < cfg.dim; ++j) zeta[j] = z[static_cast<std::size_t>(j)];
    const int xi =
        batched ? rng::index_draw(batch, static_cast<std::uint64_t>(i - 1), n_components) : -1;
    const Vec next = tsgld_step_scaled(x, cfg, xi, zeta, tame_scale, noise_scale);
    if (!next.allFinite() || next.norm() > kDivergenceRadius) {
      chain.diverged = true;
      break;
    }
    x = next;
    chain.steps_completed = i;
    const double nrm = x.norm();
    if (nrm > max_abs) max_abs = nrm;
    lyap_sum += lyapunov(x, cfg.lyapunov_delta);
    if (i % kCheckpointEvery == 0)
      chain.diagnostics.push_back(
          {i, lyap_sum / static_cast<double>(i), max_abs});
    retain(i, x);
  }

  if (single_sample && !chain.diverged) chain.samples.push_back(x);
  return chain;
}

double kl_histogram(const std::vector<Vec>& samples,
                    const std::function<double(const Vec&)>& log_density_unnormalized,
                    const HistogramSpec& spec) {
  if (samples.size() < 10000)
    throw std::invalid_argument("kl_histogram: need at least 10000 samples");
  if (!log_density_unnormalized) throw std::invalid_argument("kl_histogram: missing target");
  if (spec.bins < 2) throw std::invalid_argument("kl_histogram: need at least 2 bins");
  if (!(spec.hi > spec.lo)) throw std::invalid_argument("kl_histogram: empty range");
  const auto d = static_cast<int>(samples.front().size());
  if (d != 1 && d != 2) throw std::invalid_argument("kl_histogram: dimension must be 1 or 2");

  const int B = spec.bins;
  const double w = (spec.hi - spec.lo) / static_cast<double>(B);
  const int ext = 3 * B;  // quadrature cells beyond the range on each side
  const std::size_t n_bins = d == 1 ? static_cast<std::size_t>(B)
                                    : static_cast<std::size_t>(B) * static_cast<std::size_t>(B);

  // Target mass per bin: midpoint quadrature over the extended grid, cells
  // outside [lo, hi] folded into the nearest boundary bin.
  std::vector<double> q(n_bins, 0.0);
  const double cell_volume = d == 1 ? w : w * w;
  auto fold = [&](int idx) { return idx < 0 ? 0 : (idx >= B ? B - 1 : idx); };
  Vec point(d);
  if (d == 1) {
    for (int i = -ext; i < B + ext; ++i) {
      point[0] = spec.lo + (static_cast<double>(i) + 0.5) * w;
      const double mass = std::exp(log_density_unnormalized(point)) * cell_volume;
      q[static_cast<std::size_t>(fold(i))] += mass;
    }
  } else {
    for (int i = -ext; i < B + ext; ++i) {
      point[0] = spec.lo + (static_cast<double>(i) + 0.5) * w;
      for (int j = -ext; j < B + ext; ++j) {
        point[1] = spec.lo + (static_cast<double>(j) + 0.5) * w;
        const double mass = std::exp(log_density_unnormalized(point)) * cell_volume;
        q[static_cast<std::size_t>(fold(i)) * static_cast<std::size_t>(B) +
          static_cast<std::size_t>(fold(j))] += mass;
      }
    }
  }
  double z_total = 0.0;
  for (double m : q) z_total += m;
  if (!(z_total > 0.0) || !std::isfinite(z_total))
    throw std::runtime_error("kl_histogram: target quadrature mass is not positive");

  std::vector<std::int64_t> counts(n_bins, 0);
  std::size_t out_of_range = 0;
  auto bin_of = [&](double v, bool& outside) {
    if (!std::isfinite(v)) throw std::invalid_argument("kl_histogram: non-finite sample");
    if (v < spec.lo || v > spec.hi) outside = true;
    if (v <= spec.lo) return 0;
    if (v >= spec.hi) return B - 1;
    return fold(static_cast<int>(std::floor((v - spec.lo) / w)));
  };
  for (const Vec& s : samples) {
    if (s.size() != d) throw std::invalid_argument("kl_histogram: mixed sample dimensions");
    bool outside = false;
    if (d == 1) {
      const int i = bin_of(s[0], outside);
      ++counts[static_cast<std::size_t>(i)];
    } else {
      const int i = bin_of(s[0], outside);
      const int j = bin_of(s[1], outside);
      ++counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(B) +
               static_cast<std::size_t>(j)];
    }
    if (outside) ++out_of_range;
  }
  if (out_of_range == samples.size())
    throw std::runtime_error("kl_histogram: all samples outside the histogram range");

  const auto n = static_cast<double>(samples.size());
  double kl = 0.0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    if (counts[i] == 0) continue;
    const double p_hat = static_cast<double>(counts[i]) / n;
    const double q_i = q[i] / z_total;
    kl += p_hat * std::log(p_hat / q_i);
  }
  return kl;
}

double stationary_moment(const std::vector<Vec>& samples, int k) {
  if (samples.empty()) throw std::invalid_argument("stationary_moment: no samples");
  if (k < 1) throw std::invalid_argument("stationary_moment: need k >= 1");
  const bool scalar = samples.front().size() == 1;
  std::vector<double> vals(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    vals[i] = scalar ? std::pow(samples[i][0], k) : std::pow(samples[i].norm(), k);
  return pairwise_sum(vals) / static_cast<double>(vals.size());
}

double batch_means_stderr(const std::vector<double>& values, int n_batches) {
  if (n_batches < 2) throw std::invalid_argument("batch_means_stderr: need at least 2 batches");
  const std::size_t m = values.size() / static_cast<std::size_t>(n_batches);
  if (m == 0)
    throw std::invalid_argument("batch_means_stderr: too few values for the batch count");
  std::vector<double> means(static_cast<std::size_t>(n_batches));
  for (int b = 0; b < n_batches; ++b)
    means[static_cast<std::size_t>(b)] =
        pairwise_sum(values.data() + static_cast<std::size_t>(b) * m, m) /
        static_cast<double>(m);
  const auto nb = static_cast<double>(n_batches);
  const double grand = pairwise_sum(means) / nb;
  std::vector<double> sq(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double dmean = means[i] - grand;
    sq[i] = dmean * dmean;
  }
  const double var = pairwise_sum(sq) / (nb - 1.0);
  return std::sqrt(var / nb);
}

}  // namespace tamed_sde
