#include "tamed_sde/run.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "tamed_sde/io.hpp"
#include "tamed_sde/rng.hpp"

namespace tamed_sde {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string out_path(const ExperimentConfig& cfg, const char* name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

std::vector<SchemeId> parse_schemes(const std::vector<std::string>& names) {
  std::vector<SchemeId> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(parse_scheme(n));
  return out;
}

}  // namespace

ConvergeOutput run_converge(const ExperimentConfig& cfg) {
  if (cfg.kind != "converge") throw RunError("run_converge: config kind is not 'converge'");
  const auto t0 = std::chrono::steady_clock::now();

  SdeProblem problem = builtin_problem(cfg.problem);
  problem.horizon = cfg.mc.horizon;
  const std::vector<SchemeId> schemes = parse_schemes(cfg.schemes);
  const SeedSpec seed{cfg.seed};

  EnsembleResult ensemble;
  try {
    ensemble = simulate_coupled(problem, schemes, cfg.taming, cfg.mc.k_ref, cfg.mc.levels,
                                cfg.mc.paths, seed, cfg.threads);
  } catch (const std::invalid_argument& e) {
    throw RunError(e.what());
  }
  if (ensemble.reference_diverged > 0)
    throw RunError("reference integration diverged on " +
                   std::to_string(ensemble.reference_diverged) + " of " +
                   std::to_string(cfg.mc.paths) +
                   " paths; refine k_ref or revisit the problem scale");

  ConvergeOutput out;
  out.rows = error_table(ensemble, cfg.test_functions);
  try {
    out.orders = order_reports(out.rows);
  } catch (const std::invalid_argument& e) {
    throw RunError(std::string("order fit failed: ") + e.what());
  }

  const std::string errors_text = errors_csv(out.rows);
  const std::string orders_text = orders_csv(out.orders);
  out.errors_path = out_path(cfg, "errors.csv");
  out.orders_path = out_path(cfg, "orders.csv");
  out.manifest_path = out_path(cfg, "manifest.txt");
  write_file(out.errors_path, errors_text);
  write_file(out.orders_path, orders_text);
  write_file(out.manifest_path,
             manifest_text(seconds_since(t0),
                           {{"errors.csv", sha256_hex(errors_text)},
                            {"orders.csv", sha256_hex(orders_text)}},
                           serialize(cfg)));
  return out;
}

SampleOutput run_sample(const ExperimentConfig& cfg) {
  if (cfg.kind != "sample") throw RunError("run_sample: config kind is not 'sample'");
  const auto t0 = std::chrono::steady_clock::now();

  const SdeProblem problem = builtin_problem(cfg.problem);
  if (!problem.potential)
    throw RunError("problem '" + cfg.problem + "' has no potential; nothing to sample");
  const double beta = cfg.sampler.beta;
  const auto target_log_density = [&problem, beta](const Vec& x) {
    return -beta * problem.potential(x);
  };
  const HistogramSpec hist{cfg.sampler.bins, cfg.sampler.range_lo, cfg.sampler.range_hi};

  SampleOutput out;
  std::string samples_text = "h,index";
  for (int j = 0; j < problem.dim; ++j) samples_text += ",x" + std::to_string(j);
  samples_text += '\n';
  std::string metrics_text = "h,n_samples,diverged,moment_k,moment,moment_stderr,kl\n";

  for (const double h : cfg.sampler.h_list) {
    SamplerConfig chain_cfg;
    chain_cfg.drift = problem.drift;
    chain_cfg.dim = problem.dim;
    chain_cfg.x0 = problem.x0;
    chain_cfg.beta = beta;
    chain_cfg.h = h;
    chain_cfg.taming = cfg.taming;
    chain_cfg.n_steps = cfg.sampler.n_steps;
    chain_cfg.burn_in = cfg.sampler.burn_in;
    chain_cfg.thin = cfg.sampler.thin;
    chain_cfg.lyapunov_delta = cfg.sampler.lyapunov_delta;
    chain_cfg.seed = SeedSpec{cfg.seed};
    const Chain chain = run_chain(chain_cfg);

    SampleHResult res;
    res.h = h;
    res.diverged = chain.diverged;
    res.n_samples = static_cast<std::int64_t>(chain.samples.size());
    res.moment_k = cfg.sampler.moment_k;

    for (std::size_t i = 0; i < chain.samples.size(); ++i) {
      samples_text += format_double(h);
      samples_text += ',';
      samples_text += std::to_string(i);
      for (int j = 0; j < problem.dim; ++j) {
        samples_text += ',';
        samples_text += format_double(chain.samples[i][j]);
      }
      samples_text += '\n';
    }

    metrics_text += format_double(h);
    metrics_text += ',';
    metrics_text += std::to_string(res.n_samples);
    metrics_text += ',';
    metrics_text += chain.diverged ? "1" : "0";
    metrics_text += ',';
    metrics_text += std::to_string(res.moment_k);
    if (chain.samples.size() >= 10000) {
      res.moment = stationary_moment(chain.samples, res.moment_k);
      const bool scalar = problem.dim == 1;
      std::vector<double> vals(chain.samples.size());
      for (std::size_t i = 0; i < chain.samples.size(); ++i)
        vals[i] = scalar ? std::pow(chain.samples[i][0], res.moment_k)
                         : std::pow(chain.samples[i].norm(), res.moment_k);
      res.moment_stderr = batch_means_stderr(vals);
      res.kl = kl_histogram(chain.samples, target_log_density, hist);
      res.metrics_valid = true;
      metrics_text += ',';
      metrics_text += format_double(res.moment);
      metrics_text += ',';
      metrics_text += format_double(res.moment_stderr);
      metrics_text += ',';
      metrics_text += format_double(res.kl);
    } else {
      metrics_text += ",,,";
    }
    metrics_text += '\n';
    out.results.push_back(res);
  }

  out.samples_path = out_path(cfg, "samples.csv");
  out.metrics_path = out_path(cfg, "metrics.csv");
  out.manifest_path = out_path(cfg, "manifest.txt");
  write_file(out.samples_path, samples_text);
  write_file(out.metrics_path, metrics_text);
  write_file(out.manifest_path,
             manifest_text(seconds_since(t0),
                           {{"samples.csv", sha256_hex(samples_text)},
                            {"metrics.csv", sha256_hex(metrics_text)}},
                           serialize(cfg)));
  return out;
}

namespace {

bool check_cutoff_branches() {
  if (cutoff_psi(0.0) != 0.0 || cutoff_psi(0.5) != 0.0 || cutoff_psi(1.0) != 0.0) return false;
  if (cutoff_psi(2.0) != 2.0 || cutoff_psi(3.0) != 3.0 || cutoff_psi(100.0) != 100.0)
    return false;
  return std::abs(cutoff_psi(1.5) - 0.75) <= 1e-12;
}

bool check_cutoff_continuity() {
  const double delta = 1e-5;
  double prev = cutoff_psi(0.9);
  for (double r = 0.9 + delta; r <= 2.1; r += delta) {
    const double cur = cutoff_psi(r);
    if (std::abs(cur - prev) > 1e-3) return false;
    prev = cur;
  }
  return true;
}

// Random (b, h, alpha, gamma) tuples from the synthetic stream.
bool check_taming_bounds(bool modified) {
  const rng::Stream s{9000u + (modified ? 1u : 0u), rng::Draw::synthetic, 0, 0, 0};
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const rng::Block blk = s.block(i);
    const int dim = 1 + static_cast<int>(blk[0] % 4);
    const double h = std::exp(-30.0 * rng::uniform01(blk[1]));
    const double alpha = 0.5 * rng::uniform01_pos(blk[2]);
    const double gamma = std::exp(3.0 * (2.0 * rng::uniform01(blk[3]) - 1.0));
    Vec b(dim);
    double z[4];
    rng::normals(s, i, z, dim);
    const double scale_mag = std::exp(30.0 * rng::uniform01(s.block(i, 1)[0]) - 10.0);
    for (int j = 0; j < dim; ++j) b[j] = scale_mag * z[j];
    if (!b.allFinite()) continue;

    if (modified) {
      const TamingConfig cfg{alpha, gamma};
      const Vec tamed = tame_modified(b, h, cfg);
      const double cap = 2.0 / gamma * std::pow(h, -alpha);
      if (tamed.norm() > b.norm() || tamed.norm() > cap) return false;
      if (cfg.gamma * std::pow(h, cfg.alpha) * b.norm() <= 1.0 &&
          std::memcmp(tamed.data(), b.data(), sizeof(double) * static_cast<std::size_t>(dim)) !=
              0)
        return false;
    } else {
      const Vec tamed = tame_classic(b, h, alpha);
      const double cap = std::pow(h, -alpha) * (1.0 + 1e-12);
      if (tamed.norm() > b.norm() || tamed.norm() > cap) return false;
    }
  }
  return true;
}

bool check_scheme_identity_untamed() {
  const SdeProblem ou = builtin_problem("ou_1d");
  const TamingConfig cfg;
  const SeedSpec seed{7};
  const BrownianLattice lat = make_lattice(seed, 0, 6, ou.horizon, ou.noise_dim);
  const TimeGrid grid{lat.h_ref, lat.increments.rows()};
  const Vec a = integrate_path(SchemeId::euler_maruyama, ou, cfg, grid, lat.increments);
  const Vec b = integrate_path(SchemeId::mte, ou, cfg, grid, lat.increments);
  return std::memcmp(a.data(), b.data(), sizeof(double)) == 0;
}

bool check_scheme_identity_additive() {
  const SdeProblem lv = builtin_problem("langevin_2d");
  const TamingConfig cfg;
  const SeedSpec seed{8};
  const BrownianLattice lat = make_lattice(seed, 0, 7, lv.horizon, lv.noise_dim);
  const TimeGrid grid{lat.h_ref, lat.increments.rows()};
  const Vec a = integrate_path(SchemeId::mte, lv, cfg, grid, lat.increments);
  const Vec b = integrate_path(SchemeId::modified_tamed_milstein, lv, cfg, grid, lat.increments);
  return std::memcmp(a.data(), b.data(), 2 * sizeof(double)) == 0;
}

bool check_lattice_coupling() {
  const SeedSpec seed{11};
  const BrownianLattice lat = make_lattice(seed, 3, 10, 1.0, 2);
  const Mat identity = coarsen(lat, 0);
  if (std::memcmp(identity.data(), lat.increments.data(),
                  sizeof(double) * static_cast<std::size_t>(identity.size())) != 0)
    return false;
  for (const int m : {1, 3, 10}) {
    const Mat coarse = coarsen(lat, m);
    const std::int64_t cell = std::int64_t{1} << m;
    for (std::int64_t j = 0; j < coarse.rows(); ++j) {
      Eigen::RowVectorXd acc = lat.increments.row(j * cell);
      for (std::int64_t i = 1; i < cell; ++i) acc += lat.increments.row(j * cell + i);
      for (int c = 0; c < coarse.cols(); ++c)
        if (std::memcmp(&acc[c], &coarse(j, c), sizeof(double)) != 0) return false;
    }
  }
  return true;
}

bool check_lattice_moments() {
  const SeedSpec seed{12};
  const int n_paths = 512;
  const int level = 6;
  std::vector<double> draws;
  double h_ref = 0.0;
  for (int p = 0; p < n_paths; ++p) {
    const BrownianLattice lat = make_lattice(seed, static_cast<std::uint64_t>(p), level, 1.0, 1);
    h_ref = lat.h_ref;
    for (Eigen::Index i = 0; i < lat.increments.rows(); ++i)
      draws.push_back(lat.increments(i, 0));
  }
  const auto n = static_cast<double>(draws.size());
  const double mean = pairwise_sum(draws) / n;
  if (std::abs(mean) > 5.0 * std::sqrt(h_ref / n)) return false;
  std::vector<double> sq(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) sq[i] = (draws[i] - mean) * (draws[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return std::abs(var - h_ref) <= 5.0 * h_ref * std::sqrt(2.0 / n);
}

bool check_increment_bound() {
  SdeProblem gl = builtin_problem("ginzburg_landau_1d");
  gl.diffusion.sigma = [](double, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  gl.diffusion.is_additive = true;
  gl.x0 = Vec::Constant(1, 3.0);
  const TamingConfig cfg;
  const double h = 0.5;
  const double cap = 2.0 / cfg.gamma * std::pow(h, 1.0 - cfg.alpha) * (1.0 + 1e-12);
  Vec x = gl.x0;
  for (int i = 0; i < 50; ++i) {
    StepInput in;
    in.t = h * i;
    in.x = x;
    in.h = h;
    in.dW = Vec::Zero(1);
    const Vec next = step(SchemeId::mte, gl, cfg, in);
    if ((next - x).norm() > cap) return false;
    x = next;
  }
  return true;
}

bool check_determinism_workers() {
  const SdeProblem gl = builtin_problem("ginzburg_landau_1d");
  const TamingConfig cfg;
  const std::vector<SchemeId> schemes = {SchemeId::mte, SchemeId::mte_rbm};
  const std::vector<int> levels = {4, 5, 6};
  const SeedSpec seed{42};
  const EnsembleResult a = simulate_coupled(gl, schemes, cfg, 8, levels, 64, seed, 1);
  const EnsembleResult b = simulate_coupled(gl, schemes, cfg, 8, levels, 64, seed, 4);
  auto same = [](const Mat& x, const Mat& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           std::memcmp(x.data(), y.data(),
                       sizeof(double) * static_cast<std::size_t>(x.size())) == 0;
  };
  if (!same(a.reference, b.reference)) return false;
  for (std::size_t s = 0; s < schemes.size(); ++s)
    for (std::size_t l = 0; l < levels.size(); ++l)
      if (!same(a.terminals[s][l], b.terminals[s][l])) return false;
  return true;
}

}  // namespace

ValidateOutput run_validate(const ExperimentConfig& cfg) {
  if (cfg.kind != "validate" && !cfg.kind.empty())
    throw RunError("run_validate: config kind is not 'validate'");
  const auto t0 = std::chrono::steady_clock::now();

  ValidateOutput out;
  out.checks = {
      {"cutoff_branch_values", check_cutoff_branches()},
      {"cutoff_continuity", check_cutoff_continuity()},
      {"modified_taming_bound", check_taming_bounds(true)},
      {"classic_taming_bound", check_taming_bounds(false)},
      {"scheme_identity_untamed", check_scheme_identity_untamed()},
      {"scheme_identity_additive", check_scheme_identity_additive()},
      {"lattice_coupling", check_lattice_coupling()},
      {"lattice_moments", check_lattice_moments()},
      {"increment_bound", check_increment_bound()},
      {"determinism_workers", check_determinism_workers()},
  };
  out.all_pass = true;
  std::string csv = "check,result\n";
  for (const auto& [name, pass] : out.checks) {
    out.all_pass = out.all_pass && pass;
    csv += name;
    csv += ',';
    csv += pass ? "pass" : "fail";
    csv += '\n';
  }

  out.validate_path = out_path(cfg, "validate.csv");
  out.manifest_path = out_path(cfg, "manifest.txt");
  write_file(out.validate_path, csv);
  ExperimentConfig echo = cfg;
  if (echo.kind.empty()) echo.kind = "validate";
  write_file(out.manifest_path,
             manifest_text(seconds_since(t0), {{"validate.csv", sha256_hex(csv)}},
                           serialize(echo)));
  return out;
}

}  // namespace tamed_sde
