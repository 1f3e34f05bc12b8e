#include <doctest.h>

#include <tamed_sde/problems.hpp>
#include <tamed_sde/rng.hpp>
#include <tamed_sde/sampler.hpp>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

using namespace tamed_sde;

namespace {

SamplerConfig quartic_config() {
  SamplerConfig cfg;
  const auto p = builtin_problem("quartic_langevin_1d");
  cfg.drift = p.drift;
  cfg.dim = 1;
  cfg.beta = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("one chain step, hand-checked") {
  SamplerConfig cfg = quartic_config();

  // zero drift, beta = 0.5, h = 0.25: noise scale sqrt(2*2*0.25) = 1 exactly
  cfg.drift.full = [](double, const Vec& x) { return Vec(Vec::Zero(x.size())); };
  cfg.drift.components.clear();
  cfg.beta = 0.5;
  cfg.h = 0.25;
  Vec x = Vec::Constant(1, 0.125);
  Vec zeta = Vec::Constant(1, 1.0);
  CHECK(tsgld_step(x, cfg, -1, zeta)[0] == 1.125);

  // cubic force, no noise: 1 - 0.01 * 1 = 0.99
  cfg = quartic_config();
  cfg.h = 0.01;
  x = Vec::Constant(1, 1.0);
  zeta = Vec::Zero(1);
  CHECK(tsgld_step(x, cfg, -1, zeta)[0] == 0.99);

  // critical point of the potential is a fixed point without noise
  x = Vec::Zero(1);
  CHECK(tsgld_step(x, cfg, -1, zeta)[0] == 0.0);

  // below the taming threshold the step equals the untamed update bitwise
  x = Vec::Constant(1, 1.2);
  zeta = Vec::Constant(1, -0.7);
  const Vec got = tsgld_step(x, cfg, -1, zeta);
  const Vec manual =
      x + cfg.h * cfg.drift.full(0.0, x) + std::sqrt(2.0 / cfg.beta * cfg.h) * zeta;
  CHECK(std::memcmp(got.data(), manual.data(), sizeof(double)) == 0);

  CHECK_THROWS_AS(tsgld_step(Vec::Constant(2, 0.0), cfg, -1, Vec::Zero(2)),
                  std::invalid_argument);  // dim mismatch vs cfg.dim
}

TEST_CASE("lyapunov scale function") {
  Vec zero = Vec::Zero(1);
  CHECK(lyapunov(zero, 0.1) == doctest::Approx(1.1051709180756477).epsilon(1e-15));
  Vec x = Vec::Constant(1, 3.0);
  CHECK(lyapunov(x, 0.1) > lyapunov(zero, 0.1));
  CHECK_THROWS_AS(lyapunov(zero, 0.0), std::invalid_argument);
}

TEST_CASE("chain bookkeeping: retention, thinning, determinism") {
  SamplerConfig cfg = quartic_config();
  cfg.h = 0.01;
  cfg.seed = SeedSpec{404};

  // burn_in == n_steps: a single retained state
  cfg.n_steps = 0;
  cfg.burn_in = 0;
  Chain c = run_chain(cfg);
  CHECK(c.samples.size() == 1);
  CHECK(c.samples[0][0] == 0.0);  // x0 defaults to the origin
  CHECK_FALSE(c.diverged);

  // thinning arithmetic: 1000 post-burn-in steps, every 10th kept
  cfg.n_steps = 1500;
  cfg.burn_in = 500;
  cfg.thin = 10;
  c = run_chain(cfg);
  CHECK(c.samples.size() == 100);
  CHECK(c.steps_completed == 1500);

  // same address, same bytes
  const Chain c2 = run_chain(cfg);
  REQUIRE(c2.samples.size() == c.samples.size());
  for (size_t i = 0; i < c.samples.size(); ++i)
    CHECK(std::memcmp(c.samples[i].data(), c2.samples[i].data(), sizeof(double)) == 0);

  // a different chain index decouples the stream
  cfg.chain_index = 1;
  const Chain c3 = run_chain(cfg);
  bool differs = false;
  for (size_t i = 0; i < c.samples.size(); ++i)
    differs = differs || (c.samples[i][0] != c3.samples[i][0]);
  CHECK(differs);

  // checkpoint cadence
  CHECK(c.diagnostics.size() == 1);  // step 1000 only
  CHECK(c.diagnostics[0].step == 1000);
  CHECK(c.diagnostics[0].lyapunov_mean > 0.0);
  CHECK(c.diagnostics[0].max_abs > 0.0);

  cfg.chain_index = 0;
  cfg.burn_in = 2000;
  CHECK_THROWS_AS(run_chain(cfg), std::invalid_argument);  // burn_in > n_steps
  cfg.burn_in = 0;
  cfg.thin = 0;
  CHECK_THROWS_AS(run_chain(cfg), std::invalid_argument);
}

TEST_CASE("divergent force field truncates the chain") {
  SamplerConfig cfg;
  cfg.dim = 1;
  cfg.drift.full = [](double, const Vec& x) { return Vec(x * 1e8); };  // explosive
  cfg.taming.gamma = 1e-30;  // effectively disable taming
  cfg.h = 1.0;
  cfg.x0 = Vec::Constant(1, 1.0);
  cfg.n_steps = 50;
  cfg.burn_in = 0;
  cfg.thin = 1;
  cfg.seed = SeedSpec{1};
  const Chain c = run_chain(cfg);
  CHECK(c.diverged);
  CHECK(c.steps_completed < 50);
  for (const auto& s : c.samples) CHECK(std::isfinite(s[0]));
}

TEST_CASE("plain langevin chain reproduces the gaussian stationary variance") {
  // b = -x, beta = 2: stationary distribution N(0, 1/2); h small enough that
  // the discretization bias (h/4-ish) is far below the Monte Carlo band
  SamplerConfig cfg;
  const auto ou = builtin_problem("ou_1d");
  cfg.drift = ou.drift;
  cfg.dim = 1;
  cfg.beta = 2.0;
  cfg.h = 1e-3;
  cfg.n_steps = 1000000;
  cfg.burn_in = 100000;
  cfg.thin = 1;
  cfg.seed = SeedSpec{2718};
  const Chain c = run_chain(cfg);
  REQUIRE_FALSE(c.diverged);
  REQUIRE(c.samples.size() == 900000);

  std::vector<double> sq(c.samples.size());
  for (size_t i = 0; i < sq.size(); ++i) sq[i] = c.samples[i][0] * c.samples[i][0];
  const double m2 = stationary_moment(c.samples, 2);
  const double se = batch_means_stderr(sq);
  CHECK(std::abs(m2 - 0.5) < 3.0 * se);
}

TEST_CASE("moment helpers") {
  std::vector<Vec> s{Vec::Constant(1, 1.0), Vec::Constant(1, -1.0), Vec::Constant(1, 3.0)};
  CHECK(stationary_moment(s, 1) == 1.0);
  CHECK(stationary_moment(s, 2) == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(stationary_moment(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(stationary_moment({}, 2), std::invalid_argument);

  std::vector<double> v(1000);
  for (size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  CHECK(batch_means_stderr(v, 10) == 0.0);  // balanced batches, zero spread
  CHECK_THROWS_AS(batch_means_stderr({1.0}, 10), std::invalid_argument);
}

TEST_CASE("kl of an exactly matching histogram is zero") {
  // uniform target on [-4, 4]: log density 0 inside, -inf outside; 128 bins
  // of width 1/16; 1000 samples placed at every bin midpoint make phat == q
  // bin for bin, in exact arithmetic AND in floating point
  HistogramSpec spec;  // 128 bins on [-4, 4]
  std::vector<Vec> samples;
  samples.reserve(128000);
  for (int b = 0; b < 128; ++b) {
    const double mid = -4.0 + (b + 0.5) / 16.0;
    for (int r = 0; r < 1000; ++r) samples.push_back(Vec::Constant(1, mid));
  }
  const auto logq = [](const Vec& x) {
    return (std::abs(x[0]) <= 4.0) ? 0.0 : -std::numeric_limits<double>::infinity();
  };
  CHECK(kl_histogram(samples, logq, spec) == 0.0);
}

TEST_CASE("kl plug-in bias stays inside the predicted band") {
  // exact inverse-cdf draws from the binned quartic target: KL should be
  // near (bins - 1) / (2n), far below the acceptance resolution
  HistogramSpec spec;
  const auto q = builtin_problem("quartic_langevin_1d");
  const auto logq = [&q](const Vec& x) { return -q.potential(x); };

  // bin probabilities by midpoint quadrature on the same grid
  const int B = spec.bins;
  const double w = (spec.hi - spec.lo) / B;
  std::vector<double> mass(static_cast<size_t>(B), 0.0);
  double z = 0.0;
  for (int b = 0; b < B; ++b) {
    const double mid = spec.lo + (b + 0.5) * w;
    mass[size_t(b)] = std::exp(-std::pow(mid, 4) / 4.0) * w;
    z += mass[size_t(b)];
  }
  for (double& m : mass) m /= z;

  const int n = 100000;
  rng::Stream s{31337, rng::Draw::synthetic, 2, 0, 0};
  std::vector<Vec> samples;
  samples.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform01(s.block(std::uint64_t(i))[0]);
    double cum = 0.0;
    int pick = B - 1;
    for (int b = 0; b < B; ++b) {
      cum += mass[size_t(b)];
      if (u < cum) {
        pick = b;
        break;
      }
    }
    samples.push_back(Vec::Constant(1, spec.lo + (pick + 0.5) * w));
  }
  const double kl = kl_histogram(samples, logq, spec);
  CHECK(kl >= 0.0);
  CHECK(kl < 1.905e-3);  // mean + 5 sigma of the plug-in bias at n = 1e5
}

TEST_CASE("kl input validation") {
  HistogramSpec spec;
  const auto logq = [](const Vec&) { return 0.0; };
  std::vector<Vec> few(100, Vec::Zero(1));
  CHECK_THROWS_AS(kl_histogram(few, logq, spec), std::invalid_argument);

  std::vector<Vec> enough(20000, Vec::Zero(1));
  const auto logq_bad = [](const Vec&) { return -std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(kl_histogram(enough, logq_bad, spec), std::runtime_error);

  HistogramSpec bad;
  bad.hi = bad.lo;
  CHECK_THROWS_AS(kl_histogram(enough, logq, bad), std::invalid_argument);
}
