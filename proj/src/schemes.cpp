#include "tamed_sde/schemes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tamed_sde {

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names = {
      "euler_maruyama", "tamed_euler",             "mte",             "mte_rbm",
      "milstein",       "modified_tamed_milstein", "truncated_euler",
  };
  return names;
}

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::euler_maruyama: return "euler_maruyama";
    case SchemeId::tamed_euler: return "tamed_euler";
    case SchemeId::mte: return "mte";
    case SchemeId::mte_rbm: return "mte_rbm";
    case SchemeId::milstein: return "milstein";
    case SchemeId::modified_tamed_milstein: return "modified_tamed_milstein";
    case SchemeId::truncated_euler: return "truncated_euler";
  }
  throw std::invalid_argument("scheme_name: bad id");
}

SchemeId parse_scheme(const std::string& name) {
  if (name == "euler_maruyama") return SchemeId::euler_maruyama;
  if (name == "tamed_euler") return SchemeId::tamed_euler;
  if (name == "mte") return SchemeId::mte;
  if (name == "mte_rbm") return SchemeId::mte_rbm;
  if (name == "milstein") return SchemeId::milstein;
  if (name == "modified_tamed_milstein") return SchemeId::modified_tamed_milstein;
  if (name == "truncated_euler") return SchemeId::truncated_euler;
  std::ostringstream msg;
  msg << "unknown scheme '" << name << "'; valid:";
  for (const auto& n : scheme_names()) msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

bool scheme_uses_batch(SchemeId id) { return id == SchemeId::mte_rbm; }

namespace {

// Per-grid constants; integrate_path computes them once so a folded path is
// bit-identical to calling step() step by step.
struct StepScales {
  double modified = 0.0;  // gamma h^alpha
  double classic = 0.0;   // h^alpha
  double radius = 0.0;    // h^-alpha

  StepScales(const TamingConfig& cfg, double h)
      : modified(cfg.gamma * std::pow(h, cfg.alpha)),
        classic(std::pow(h, cfg.alpha)),
        radius(std::pow(h, -cfg.alpha)) {}
};

bool milstein_family(SchemeId s) {
  return s == SchemeId::milstein || s == SchemeId::modified_tamed_milstein;
}

Vec step_impl(SchemeId scheme, const SdeProblem& problem, const StepScales& scales,
              const StepInput& in, const BatchSampler* sampler, bool* taming_active) {
  const double t = in.t;
  bool active = false;

  Vec sigma_point = in.x;  // where sigma is evaluated; projected for truncation
  Vec b_eff;
  switch (scheme) {
    case SchemeId::euler_maruyama:
    case SchemeId::milstein: {
      b_eff = problem.drift.full(t, in.x);
      break;
    }
    case SchemeId::tamed_euler: {
      const Vec b = problem.drift.full(t, in.x);
      if (!b.allFinite()) {
        b_eff = b;
      } else {
        b_eff = detail::tame_classic_scaled(b, scales.classic);
        active = (1.0 + scales.classic * b.norm()) != 1.0;
      }
      break;
    }
    case SchemeId::mte:
    case SchemeId::modified_tamed_milstein: {
      const Vec b = problem.drift.full(t, in.x);
      if (!b.allFinite()) {
        b_eff = b;
      } else {
        double psi = 0.0;
        b_eff = detail::tame_modified_scaled(b, scales.modified, &psi);
        active = psi > 0.0;
      }
      break;
    }
    case SchemeId::mte_rbm: {
      if (in.xi < 0) throw std::invalid_argument("step: mte_rbm needs a batch index");
      if (!sampler) throw std::invalid_argument("step: mte_rbm needs a batch sampler");
      const Vec b = batch_drift(problem.drift, *sampler, in.xi, t, in.x);
      if (!b.allFinite()) {
        b_eff = b;
      } else {
        double psi = 0.0;
        b_eff = detail::tame_modified_scaled(b, scales.modified, &psi);
        active = psi > 0.0;
      }
      break;
    }
    case SchemeId::truncated_euler: {
      if (in.x.allFinite() && in.x.norm() > scales.radius) {
        sigma_point = project_to_ball(in.x, scales.radius);
        active = true;
      }
      b_eff = problem.drift.full(t, sigma_point);
      break;
    }
  }
  if (taming_active) *taming_active = active;

  const Mat s = problem.diffusion.sigma(t, sigma_point);
  Vec next = in.x + in.h * b_eff + s * in.dW;

  if (milstein_family(scheme) && !problem.diffusion.is_additive) {
    if (!problem.diffusion.sigma_grad || problem.noise_dim != problem.dim)
      throw std::invalid_argument(
          "step: Milstein-family schemes need additive noise or diagonal noise with "
          "sigma_grad");
    const Vec g = problem.diffusion.sigma_grad(t, in.x);
    for (int i = 0; i < problem.dim; ++i)
      next[i] += 0.5 * s(i, i) * g[i] * (in.dW[i] * in.dW[i] - in.h);
  }
  return next;
}

}  // namespace

Vec step(SchemeId scheme, const SdeProblem& problem, const TamingConfig& cfg,
         const StepInput& input) {
  cfg.validate();
  if (!(input.h > 0.0) || !std::isfinite(input.h))
    throw std::invalid_argument("step: need finite h > 0");
  if (input.dW.size() != problem.noise_dim)
    throw std::invalid_argument("step: dW dimension does not match the noise");
  const StepScales scales(cfg, input.h);
  BatchSampler sampler;
  const BatchSampler* sampler_ptr = nullptr;
  if (scheme_uses_batch(scheme)) {
    if (!problem.drift.has_batch())
      throw std::invalid_argument("step: batch scheme on a drift without components");
    sampler = BatchSampler::uniform(static_cast<int>(problem.drift.components.size()));
    sampler_ptr = &sampler;
  }
  return step_impl(scheme, problem, scales, input, sampler_ptr, nullptr);
}

Vec integrate_path(SchemeId scheme, const SdeProblem& problem, const TamingConfig& cfg,
                   const TimeGrid& grid, const Mat& increments, const int* xi_stream,
                   PathStats* stats) {
  cfg.validate();
  if (grid.steps < 0) throw std::invalid_argument("integrate_path: negative step count");
  if (increments.rows() != grid.steps)
    throw std::invalid_argument("integrate_path: increment count does not match the grid");
  if (grid.steps > 0 && increments.cols() != problem.noise_dim)
    throw std::invalid_argument("integrate_path: increment width does not match the noise");
  if (scheme_uses_batch(scheme) && !xi_stream && grid.steps > 0)
    throw std::invalid_argument("integrate_path: batch scheme needs an index stream");

  PathStats local;
  Vec x = problem.x0;
  if (grid.steps > 0) {
    const StepScales scales(cfg, grid.h);
    BatchSampler sampler;
    const BatchSampler* sampler_ptr = nullptr;
    if (scheme_uses_batch(scheme)) {
      sampler = BatchSampler::uniform(static_cast<int>(problem.drift.components.size()));
      sampler_ptr = &sampler;
    }
    StepInput in;
    in.h = grid.h;
    for (std::int64_t i = 0; i < grid.steps; ++i) {
      if (!x.allFinite()) {
        local.diverged = true;
        break;
      }
      in.t = grid.time(i);
      in.x = x;
      in.dW = increments.row(i).transpose();
      in.xi = xi_stream ? xi_stream[i] : -1;
      bool active = false;
      x = step_impl(scheme, problem, scales, in, sampler_ptr, &active);
      ++local.steps;
      if (active) ++local.taming_active;
    }
    if (!x.allFinite()) local.diverged = true;
  }
  if (stats) *stats = local;
  return x;
}

}  // namespace tamed_sde
