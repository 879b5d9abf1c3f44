#include <cmath>
#include <vector>

#include "datasets.hpp"
#include "doctest.h"
#include "vstsae/eb_backtransform.hpp"
#include "vstsae/errors.hpp"

using namespace vstsae;

TEST_CASE("arcsin closed-form posterior moments match 64-node quadrature") {
  const auto e = catalog("bernoulli-arcsin");
  double worst_mean = 0.0, worst_var = 0.0;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      const double c = -1.2 + 2.4 * a / 9.0;
      const double v = 0.001 * std::pow(500.0, b / 9.0);  // 0.001 .. 0.5
      const PosteriorSpec spec{c, v, 64};
      worst_mean = std::max(worst_mean, std::abs(posterior_mean_inverse(spec, e.transform) -
                                                 posterior_mean_inverse(spec, e.transform, MomentRoute::kQuadrature)));
      worst_var = std::max(worst_var, std::abs(posterior_variance_inverse(spec, e.transform) -
                                               posterior_variance_inverse(spec, e.transform, MomentRoute::kQuadrature)));
    }
  }
  CHECK(worst_mean <= 1e-10);
  CHECK(worst_var <= 1e-10);
}

TEST_CASE("other closed forms match quadrature") {
  for (const char* name : {"ghs-arcsinh", "gamma-log", "lognormal"}) {
    const std::vector<double> shape(catalog_shape_arity(name), 2.0);
    const auto e = catalog(name, shape);
    for (double c : {-1.0, 0.0, 0.8}) {
      for (double v : {0.01, 0.1, 0.3}) {
        const PosteriorSpec spec{c, v, 64};
        INFO(name << " c=" << c << " v=" << v);
        const double cm = posterior_mean_inverse(spec, e.transform);
        CHECK(cm == doctest::Approx(posterior_mean_inverse(spec, e.transform, MomentRoute::kQuadrature))
                        .epsilon(1e-11));
        CHECK(posterior_variance_inverse(spec, e.transform) ==
              doctest::Approx(posterior_variance_inverse(spec, e.transform, MomentRoute::kQuadrature)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("posterior variance closed form stays accurate for tiny variances") {
  const auto e = catalog("bernoulli-arcsin");
  // Delta method: Var ~ (cos(c)/2)^2 v for small v.
  const double c = 0.4, v = 1e-9;
  const double delta = std::pow(std::cos(c) / 2.0, 2) * v;
  CHECK(posterior_variance_inverse({c, v, 40}, e.transform) == doctest::Approx(delta).epsilon(1e-6));
}

TEST_CASE("degenerate posterior returns g_inv(center)") {
  const auto e = catalog("poisson-sqrt");
  CHECK(posterior_mean_inverse({3.0, 0.0, 40}, e.transform) == doctest::Approx(2.25));
  CHECK(posterior_variance_inverse({3.0, 0.0, 40}, e.transform) == 0.0);
  CHECK_THROWS_AS(posterior_mean_inverse({0.0, 0.1, 4}, e.transform), InputError);
  CHECK_THROWS_AS(posterior_mean_inverse({0.0, -0.1, 40}, e.transform), InputError);
}

TEST_CASE("quadrature clamps are counted for range-limited inverses") {
  const auto e = catalog("poisson-sqrt");
  ClampCounter clamps;
  posterior_mean_inverse({0.1, 0.5, 40}, e.transform, MomentRoute::kAuto, &clamps);
  CHECK(clamps.quadrature_nodes > 0);
  ClampCounter none;
  posterior_mean_inverse({10.0, 0.01, 40}, e.transform, MomentRoute::kAuto, &none);
  CHECK(none.quadrature_nodes == 0);
}

TEST_CASE("identity transform: eb = peb = nbt = EBLUP") {
  const auto ds = testsupport::identity_dataset(20, 3);
  const auto e = catalog("normal-identity");
  const auto fit = fit_model(ds.model_data(), VarianceMethod::kREML);
  const auto est = point_estimates(ds, fit, e.transform, e.coeffs);
  for (std::size_t i = 0; i < ds.m(); ++i) {
    CHECK(std::abs(est.areas[i].eb - fit.theta_eb[i]) <= 1e-12);
    CHECK(std::abs(est.areas[i].peb - fit.theta_eb[i]) <= 1e-12);
    CHECK(std::abs(est.areas[i].nbt - fit.theta_eb[i]) <= 1e-12);
  }
}

TEST_CASE("arcsin EB applies the multiplier and shift to pEB") {
  const auto ds = testsupport::arcsin_dataset(25, 4);
  const auto e = catalog("bernoulli-arcsin");
  const auto fit = fit_model(ds.model_data(), VarianceMethod::kYL);
  const auto est = point_estimates(ds, fit, e.transform, e.coeffs);
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const double D = ds[i].D;
    const double g = g1(fit.A_hat, D);
    CHECK(est.areas[i].peb == doctest::Approx(0.5 * (1 + std::sin(fit.theta_eb[i]) * std::exp(-g / 2))).epsilon(1e-14));
    CHECK(est.areas[i].eb == doctest::Approx((est.areas[i].peb + D / 4) / (1 + D / 2)).epsilon(1e-14));
    CHECK(est.areas[i].nbt == doctest::Approx(0.5 * (1 + std::sin(fit.theta_eb[i]))).epsilon(1e-14));
    CHECK(est.areas[i].direct == ds[i].y_direct);
  }
}
