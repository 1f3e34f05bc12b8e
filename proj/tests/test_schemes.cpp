#include <doctest.h>

#include <tamed_sde/montecarlo.hpp>
#include <tamed_sde/problems.hpp>
#include <tamed_sde/schemes.hpp>

#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace tamed_sde;

namespace {

StepInput make_input(double t, double x, double h, double dw) {
  StepInput in;
  in.t = t;
  in.x = Vec::Constant(1, x);
  in.h = h;
  in.dW = Vec::Constant(1, dw);
  return in;
}

}  // namespace

TEST_CASE("single-step hand values on the 1D cubic problem") {
  const auto p = builtin_problem("ginzburg_landau_1d");
  const TamingConfig cfg;

  // x=1, h=0.01: drift -2.875 untamed (r = 0.1 * 2.875 < 1), sigma term 0
  Vec next = step(SchemeId::mte, p, cfg, make_input(0.0, 1.0, 0.01, 0.0));
  CHECK(next[0] == 0.97125);

  // euler agrees exactly below threshold
  next = step(SchemeId::euler_maruyama, p, cfg, make_input(0.0, 1.0, 0.01, 0.0));
  CHECK(next[0] == 0.97125);

  // milstein adds 0.5 * sigma * sigma' * (dW^2 - h)
  // = 0.97125 + 0.5*1*0.05 + 0.5*0.5*0.5*(0.01 - 0.01) + corr
  next = step(SchemeId::milstein, p, cfg, make_input(0.0, 1.0, 0.01, 0.1));
  CHECK(next[0] == doctest::Approx(1.02125 + 0.125 * (0.01 - 0.01)).epsilon(1e-15));

  // pure diffusion move when the drift vanishes
  const auto ou = builtin_problem("ou_1d");
  next = step(SchemeId::mte, ou, cfg, make_input(0.0, 0.0, 0.25, 0.3));
  CHECK(next[0] == 0.3);
}

TEST_CASE("deterministic two-step fold") {
  auto p = builtin_problem("ou_1d");  // b = -x, additive
  const TamingConfig cfg;
  TimeGrid grid{0.5, 2, 0.0};
  const Mat dw = Mat::Zero(2, 1);
  PathStats stats;
  const Vec xT = integrate_path(SchemeId::euler_maruyama, p, cfg, grid, dw, nullptr, &stats);
  CHECK(xT[0] == 0.25);  // 1 -> 0.5 -> 0.25
  CHECK(stats.steps == 2);
  CHECK_FALSE(stats.diverged);

  // zero steps returns the initial state
  TimeGrid none{0.5, 0, 0.0};
  const Vec x0 = integrate_path(SchemeId::mte, p, cfg, none, Mat::Zero(0, 1));
  CHECK(x0[0] == 1.0);
}

TEST_CASE("below-threshold equivalences are bitwise") {
  const TamingConfig cfg;

  // mte vs euler on a full random path of the linear problem
  const auto ou = builtin_problem("ou_1d");
  const auto lat = make_lattice(SeedSpec{7}, 11, 6, ou.horizon, 1);
  TimeGrid grid{lat.h_ref, 64, 0.0};
  const Vec a = integrate_path(SchemeId::euler_maruyama, ou, cfg, grid, lat.increments);
  const Vec b = integrate_path(SchemeId::mte, ou, cfg, grid, lat.increments);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double)) == 0);

  // modified tamed milstein vs mte on additive 2D noise
  const auto lg = builtin_problem("langevin_2d");
  const auto lat2 = make_lattice(SeedSpec{8}, 3, 7, lg.horizon, 2);
  TimeGrid grid2{lat2.h_ref, 128, 0.0};
  const Vec c = integrate_path(SchemeId::mte, lg, cfg, grid2, lat2.increments);
  const Vec d = integrate_path(SchemeId::modified_tamed_milstein, lg, cfg, grid2, lat2.increments);
  CHECK(std::memcmp(c.data(), d.data(), 2 * sizeof(double)) == 0);
}

TEST_CASE("tamed step increments are bounded") {
  // with sigma == 0 the per-step move is at most h * 2/gamma h^-alpha
  auto p = builtin_problem("ginzburg_landau_1d");
  p.diffusion.sigma = [](double, const Vec& x) { return Mat::Zero(1, 1) * x[0]; };
  p.diffusion.is_additive = true;
  p.x0 = Vec::Constant(1, 3.0);
  const TamingConfig cfg;
  const double h = 0.5;
  const double cap = h * (2.0 / cfg.gamma) * std::pow(h, -cfg.alpha) * (1.0 + 1e-12);

  Vec x = p.x0;
  for (int i = 0; i < 50; ++i) {
    const Vec nx = step(SchemeId::mte, p, cfg, make_input(i * h, x[0], h, 0.0));
    CHECK(std::abs(nx[0] - x[0]) <= cap);
    x = nx;
  }
}

TEST_CASE("euler blows up where the tamed scheme stays bounded") {
  // frozen iterates of x_{k+1} = x_k - h (x_k^3 + 1.875 x_k), x_0 = 3, h = 0.5
  auto p = builtin_problem("ginzburg_landau_1d");
  p.diffusion.sigma = [](double, const Vec&) { return Mat::Zero(1, 1); };
  p.diffusion.is_additive = true;
  const TamingConfig cfg;
  const double h = 0.5;

  const double euler_iterates[5] = {-13.3125, 1178.8062744140625, -819025232.4312717,
                                    2.7470201767841233e+26, -1.0364671744469349e+79};
  Vec x = Vec::Constant(1, 3.0);
  for (int i = 0; i < 5; ++i) {
    x = step(SchemeId::euler_maruyama, p, cfg, make_input(i * h, x[0], h, 0.0));
    CHECK(x[0] == euler_iterates[i]);
  }
  CHECK(std::abs(x[0]) > 1e6);

  x = Vec::Constant(1, 3.0);
  double sup = 0.0;  // over the iterates after the start
  for (int i = 0; i < 50; ++i) {
    x = step(SchemeId::mte, p, cfg, make_input(i * h, x[0], h, 0.0));
    sup = std::max(sup, std::abs(x[0]));
  }
  CHECK(sup == doctest::Approx(2.3222711008308385).epsilon(1e-14));
  CHECK(sup <= 10.0);
}

TEST_CASE("divergence is detected and reported") {
  auto p = builtin_problem("ginzburg_landau_1d");
  p.diffusion.sigma = [](double, const Vec&) { return Mat::Zero(1, 1); };
  p.diffusion.is_additive = true;
  p.x0 = Vec::Constant(1, 3.0);
  const TamingConfig cfg;
  TimeGrid grid{0.5, 50, 0.0};
  PathStats stats;
  const Vec xT =
      integrate_path(SchemeId::euler_maruyama, p, cfg, grid, Mat::Zero(50, 1), nullptr, &stats);
  CHECK(stats.diverged);
  CHECK(stats.steps < 50);
  CHECK_FALSE(std::isfinite(xT[0]));
}

TEST_CASE("batch scheme needs indices and a decomposition") {
  const auto p = builtin_problem("ginzburg_landau_1d");
  const TamingConfig cfg;
  StepInput in = make_input(0.0, 1.0, 0.01, 0.0);

  CHECK_THROWS_WITH_AS(step(SchemeId::mte_rbm, p, cfg, in),
                       doctest::Contains("batch index"), std::invalid_argument);

  in.xi = 0;
  CHECK(step(SchemeId::mte_rbm, p, cfg, in)[0] == 1.0 - 0.01 * 2.0);  // weighted cubic part
  in.xi = 1;
  CHECK(step(SchemeId::mte_rbm, p, cfg, in)[0] == 1.0 - 0.01 * 3.75);  // weighted linear part

  auto ou = builtin_problem("ou_1d");  // no decomposition
  in.xi = 0;
  CHECK_THROWS_AS(step(SchemeId::mte_rbm, ou, cfg, in), std::invalid_argument);
}

TEST_CASE("milstein family needs diagonal derivative info on multiplicative noise") {
  auto p = builtin_problem("ginzburg_landau_1d");
  p.diffusion.sigma_grad = VecField{};  // drop the derivative
  const TamingConfig cfg;
  CHECK_THROWS_AS(step(SchemeId::milstein, p, cfg, make_input(0.0, 1.0, 0.01, 0.0)),
                  std::invalid_argument);

  // additive noise is fine without sigma_grad
  auto lg = builtin_problem("langevin_2d");
  lg.diffusion.sigma_grad = VecField{};
  StepInput in;
  in.x = lg.x0;
  in.h = 0.01;
  in.dW = Vec::Zero(2);
  CHECK_NOTHROW(step(SchemeId::modified_tamed_milstein, lg, cfg, in));
}

TEST_CASE("truncated euler caps the evaluation point") {
  const auto p = builtin_problem("ginzburg_landau_1d");
  const TamingConfig cfg;
  const double h = 0.25;  // radius h^-0.5 = 2
  // |x| = 4 > 2: drift and diffusion evaluated at the projected point 2
  const Vec next = step(SchemeId::truncated_euler, p, cfg, make_input(0.0, 4.0, h, 1.0));
  const double b_proj = -(8.0 + 1.875 * 2.0);
  CHECK(next[0] == doctest::Approx(4.0 + h * b_proj + 0.5 * 2.0 * 1.0).epsilon(1e-15));
}

TEST_CASE("scheme registry round-trips names") {
  CHECK(parse_scheme("mte") == SchemeId::mte);
  CHECK(parse_scheme("modified_tamed_milstein") == SchemeId::modified_tamed_milstein);
  CHECK(scheme_name(SchemeId::tamed_euler) == "tamed_euler");
  CHECK(scheme_uses_batch(SchemeId::mte_rbm));
  CHECK_FALSE(scheme_uses_batch(SchemeId::mte));
  CHECK_THROWS_WITH_AS(parse_scheme("leapfrog"), doctest::Contains("valid"),
                       std::invalid_argument);
  CHECK(scheme_names().size() == 7);
}

TEST_CASE("grid shape mismatches are rejected") {
  const auto p = builtin_problem("ou_1d");
  const TamingConfig cfg;
  TimeGrid grid{0.25, 4, 0.0};
  CHECK_THROWS_AS(integrate_path(SchemeId::mte, p, cfg, grid, Mat::Zero(3, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_path(SchemeId::mte, p, cfg, grid, Mat::Zero(4, 2)),
                  std::invalid_argument);
}
