#include "tamed_sde/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tamed_sde {

BatchSampler BatchSampler::uniform(int n_components) {
  if (n_components < 2)
    throw std::invalid_argument("BatchSampler: need at least 2 components");
  BatchSampler s;
  s.component_count = n_components;
  return s;
}

double BatchSampler::weight(int xi) const {
  if (xi < 0 || xi >= component_count)
    throw std::out_of_range("BatchSampler: batch index out of range");
  return static_cast<double>(component_count);
}

Vec batch_drift(const DriftField& drift, const BatchSampler& sampler, int xi, double t,
                const Vec& x) {
  if (!drift.has_batch())
    throw std::invalid_argument("batch_drift: drift has no component decomposition");
  if (sampler.component_count != static_cast<int>(drift.components.size()))
    throw std::invalid_argument("batch_drift: sampler/component count mismatch");
  const double w = sampler.weight(xi);  // range-checks xi before we index
  return w * drift.components[static_cast<std::size_t>(xi)](t, x);
}

namespace {

SdeProblem make_ginzburg_landau_1d() {
  SdeProblem p;
  p.name = "ginzburg_landau_1d";
  p.dim = 1;
  p.noise_dim = 1;
  p.drift.full = [](double, const Vec& x) {
    Vec b(1);
    b[0] = -(x[0] * x[0] * x[0] + 1.875 * x[0]);
    return b;
  };
  p.drift.components = {
      [](double, const Vec& x) {
        Vec b(1);
        b[0] = -(x[0] * x[0] * x[0]);
        return b;
      },
      [](double, const Vec& x) {
        Vec b(1);
        b[0] = -1.875 * x[0];
        return b;
      },
  };
  p.diffusion.sigma = [](double, const Vec& x) {
    Mat s(1, 1);
    s(0, 0) = 0.5 * x[0];
    return s;
  };
  p.diffusion.sigma_grad = [](double, const Vec&) {
    Vec g(1);
    g[0] = 0.5;
    return g;
  };
  p.diffusion.is_additive = false;
  p.x0 = Vec::Constant(1, 1.0);
  p.horizon = 1.0;
  return p;
}

SdeProblem make_langevin_2d() {
  SdeProblem p;
  p.name = "langevin_2d";
  p.dim = 2;
  p.noise_dim = 2;
  p.drift.full = [](double, const Vec& x) { return Vec(x - x.squaredNorm() * x); };
  p.drift.components = {
      [](double, const Vec& x) { return Vec(-x.squaredNorm() * x); },
      [](double, const Vec& x) { return Vec(x); },
  };
  p.diffusion.sigma = [](double, const Vec&) { return Mat(Mat::Identity(2, 2)); };
  p.diffusion.is_additive = true;
  p.x0 = Vec(2);
  p.x0 << 0.25, 1.0 / 3.0;
  p.horizon = 1.0;
  return p;
}

SdeProblem make_ou_1d() {
  SdeProblem p;
  p.name = "ou_1d";
  p.dim = 1;
  p.noise_dim = 1;
  p.drift.full = [](double, const Vec& x) { return Vec(-x); };
  p.diffusion.sigma = [](double, const Vec&) { return Mat(Mat::Identity(1, 1)); };
  p.diffusion.is_additive = true;
  p.x0 = Vec::Constant(1, 1.0);
  p.horizon = 1.0;
  p.potential = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  return p;
}

SdeProblem make_quartic_langevin_1d() {
  SdeProblem p;
  p.name = "quartic_langevin_1d";
  p.dim = 1;
  p.noise_dim = 1;
  p.drift.full = [](double, const Vec& x) {
    Vec b(1);
    b[0] = -(x[0] * x[0] * x[0]);
    return b;
  };
  p.diffusion.sigma = [](double, const Vec&) {
    Mat s(1, 1);
    s(0, 0) = std::sqrt(2.0);
    return s;
  };
  p.diffusion.is_additive = true;
  p.x0 = Vec::Zero(1);
  p.horizon = 1.0;
  p.potential = [](const Vec& x) {
    const double x2 = x.squaredNorm();
    return 0.25 * x2 * x2;
  };
  return p;
}

}  // namespace

const std::vector<std::string>& builtin_problem_names() {
  static const std::vector<std::string> names = {"ginzburg_landau_1d", "langevin_2d", "ou_1d",
                                                 "quartic_langevin_1d"};
  return names;
}

SdeProblem builtin_problem(const std::string& name) {
  if (name == "ginzburg_landau_1d") return make_ginzburg_landau_1d();
  if (name == "langevin_2d") return make_langevin_2d();
  if (name == "ou_1d") return make_ou_1d();
  if (name == "quartic_langevin_1d") return make_quartic_langevin_1d();
  std::ostringstream msg;
  msg << "unknown problem '" << name << "'; valid:";
  for (const auto& n : builtin_problem_names()) msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

const std::vector<std::string>& test_function_names() {
  static const std::vector<std::string> names = {"cos_x", "cos_exp_x", "exp_sumsq",
                                                 "cos_exp_sum"};
  return names;
}

int test_function_dim(const std::string& name) {
  if (name == "cos_x" || name == "cos_exp_x") return 1;
  if (name == "exp_sumsq" || name == "cos_exp_sum") return 2;
  std::ostringstream msg;
  msg << "unknown test function '" << name << "'; valid:";
  for (const auto& n : test_function_names()) msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

double test_function(const std::string& name, const Vec& x) {
  const int want = test_function_dim(name);
  if (x.size() != want) {
    std::ostringstream msg;
    msg << "test function '" << name << "' expects dim " << want << ", got " << x.size();
    throw std::invalid_argument(msg.str());
  }
  if (name == "cos_x") return std::cos(x[0]);
  if (name == "cos_exp_x") return std::cos(std::exp(x[0]));
  if (name == "exp_sumsq") return std::exp(x[0] * x[0] + x[1] * x[1]);
  return std::cos(std::exp(x[0] + x[1]));
}

}  // namespace tamed_sde
