#ifndef TAMED_SDE_PROBLEMS_HPP
#define TAMED_SDE_PROBLEMS_HPP

// Problem definitions: drift (optionally split into summable components for
// batch estimation), diffusion, and the registries of built-in problems and
// scalar observables that config files reference by name.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace tamed_sde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using VecField = std::function<Vec(double t, const Vec& x)>;
using MatField = std::function<Mat(double t, const Vec& x)>;

struct DriftField {
  VecField full;
  // Pointwise sum of components equals full; empty means no decomposition.
  std::vector<VecField> components;

  bool has_batch() const { return components.size() >= 2; }
};

struct DiffusionField {
  MatField sigma;  // d x d' matrix
  // Per-coordinate derivative d(sigma_ii)/dx_i for diagonal noise; empty
  // function when unavailable. Only Milstein-family schemes consult it.
  VecField sigma_grad;
  bool is_additive = false;
};

struct SdeProblem {
  std::string name;
  int dim = 0;
  int noise_dim = 0;
  DriftField drift;
  DiffusionField diffusion;
  Vec x0;
  double horizon = 1.0;
  // Potential U with drift = -grad U, when the problem has one (the sampler
  // targets exp(-beta U)); empty function otherwise.
  std::function<double(const Vec&)> potential;
};

// Uniform single-component pick, reweighted by the component count so the
// estimator stays unbiased: E weight(xi) * component_xi = full.
struct BatchSampler {
  int component_count = 0;

  static BatchSampler uniform(int n_components);
  double weight(int xi) const;
};

// weight(xi) * component_xi(t, x). Throws if the decomposition is missing or
// xi is out of range.
Vec batch_drift(const DriftField& drift, const BatchSampler& sampler, int xi, double t,
                const Vec& x);

// Names: ginzburg_landau_1d, langevin_2d, ou_1d, quartic_langevin_1d.
SdeProblem builtin_problem(const std::string& name);
const std::vector<std::string>& builtin_problem_names();

// Names: cos_x, cos_exp_x (1D), exp_sumsq, cos_exp_sum (2D).
double test_function(const std::string& name, const Vec& x);
const std::vector<std::string>& test_function_names();
int test_function_dim(const std::string& name);

}  // namespace tamed_sde

#endif
