#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "vstsae/errors.hpp"
#include "vstsae/transforms.hpp"

using namespace vstsae;

namespace {

std::vector<double> shape_for(std::string_view name) {
  return std::vector<double>(catalog_shape_arity(name), 1.7);
}

// Interior grid over a family's mean domain.
std::vector<double> mean_grid(const Bounds& b) {
  std::vector<double> g;
  const int n = 200;
  for (int i = 1; i < n; ++i) {
    const double u = static_cast<double>(i) / n;
    if (b.finite_lo() && b.finite_hi()) {
      g.push_back(b.lo + (b.hi - b.lo) * u);
    } else if (b.finite_lo()) {
      g.push_back(b.lo + 0.02 + 30.0 * u * u);
    } else {
      g.push_back(-15.0 + 30.0 * u);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("catalog lists seven families with the expected (a, b)") {
  REQUIRE(catalog_families().size() == 7);
  const auto arcsin = catalog("bernoulli-arcsin");
  CHECK(arcsin.coeffs.a == 1.0);
  CHECK(arcsin.coeffs.b == -0.5);
  const auto poisson = catalog("poisson-sqrt");
  CHECK(poisson.coeffs.a == 0.0);
  CHECK(poisson.coeffs.b == -0.5);
  const double r = 4.0;
  const auto nb = catalog("negbinomial", std::vector<double>{r});
  CHECK(nb.coeffs.a == doctest::Approx(-1.0 / r));
  CHECK(nb.coeffs.b == -0.5);
  const auto normal = catalog("normal-identity");
  CHECK(normal.coeffs.a == 0.0);
  CHECK(normal.coeffs.b == 0.0);
  const auto gamma = catalog("gamma-log", std::vector<double>{r});
  CHECK(gamma.coeffs.a == doctest::Approx(-1.0 / r));
  CHECK(gamma.coeffs.b == 0.0);
  const auto ghs = catalog("ghs-arcsinh");
  CHECK(ghs.coeffs.a == -1.0);
  CHECK(ghs.coeffs.b == 0.0);
  const double phi = 0.5;
  const auto ln = catalog("lognormal", std::vector<double>{phi});
  CHECK(ln.coeffs.a == doctest::Approx(-std::expm1(phi * phi)));
}

TEST_CASE("arcsin values at simple points") {
  const auto e = catalog("bernoulli-arcsin");
  CHECK(e.transform.g(0.5) == 0.0);
  CHECK(e.transform.g_inv(0.0) == 0.5);
  CHECK(e.transform.g(1.0) == doctest::Approx(M_PI / 2));
}

TEST_CASE("curvature ratio equals a*mu + b on a grid for every family") {
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    double worst = 0.0;
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      worst = std::max(worst, std::abs(curvature_ratio(e.transform, mu) - (e.coeffs.a * mu + e.coeffs.b)));
    }
    INFO(name);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("g stabilizes the variance: g'^2 sigma^2 = k") {
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    double worst = 0.0;
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      const double d1 = e.transform.d1g(mu);
      worst = std::max(worst, std::abs(d1 * d1 * e.qvf.variance(mu) - e.qvf.k));
    }
    INFO(name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("analytic derivatives match central differences") {
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    const Transform& t = e.transform;
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      double scale = std::max(1.0, std::abs(mu));
      if (t.domain.finite_lo()) scale = std::min(scale, mu - t.domain.lo);
      if (t.domain.finite_hi()) scale = std::min(scale, t.domain.hi - mu);
      const double h = 1e-5 * scale;
      if (!t.domain.contains_interior(mu - 2 * h) || !t.domain.contains_interior(mu + 2 * h)) continue;
      const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
      INFO(name << " mu=" << mu);
      CHECK(rel((t.g(mu + h) - t.g(mu - h)) / (2 * h), t.d1g(mu)) < 1e-6);
      CHECK(rel((t.d1g(mu + h) - t.d1g(mu - h)) / (2 * h), t.d2g(mu)) < 1e-6);
      CHECK(rel((t.d2g(mu + h) - t.d2g(mu - h)) / (2 * h), t.d3g(mu)) < 1e-6);
    }
  }
}

TEST_CASE("g_inv inverts g") {
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      INFO(name << " mu=" << mu);
      CHECK(std::abs(e.transform.g_inv(e.transform.g(mu)) - mu) <= 1e-12 * std::max(1.0, std::abs(mu)));
    }
  }
}

TEST_CASE("curvature ratio is unchanged by the sign flip g -> -g") {
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    Transform neg = e.transform;
    neg.g = [g = e.transform.g](double mu) { return -g(mu); };
    neg.d1g = [d = e.transform.d1g](double mu) { return -d(mu); };
    neg.d2g = [d = e.transform.d2g](double mu) { return -d(mu); };
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      CHECK(curvature_ratio(neg, mu) == doctest::Approx(curvature_ratio(e.transform, mu)).epsilon(1e-14));
    }
  }
}

TEST_CASE("back_transform_correct and forward_shift are inverse maps") {
  const double D = 0.05;
  for (std::string_view name : catalog_families()) {
    const auto e = catalog(name, shape_for(name));
    for (double mu : mean_grid(e.qvf.mean_domain)) {
      double theta = 0.0;
      try {
        theta = forward_shift(mu, D, e.coeffs, e.transform);
      } catch (const DomainError&) {
        continue;  // shifted mean leaves the domain near an edge
      }
      INFO(name << " mu=" << mu);
      CHECK(back_transform_correct(theta, D, e.coeffs, e.transform) ==
            doctest::Approx(mu).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("identity transform: back-transform is the identity") {
  const auto e = catalog("normal-identity");
  for (double th : {-3.0, 0.0, 2.5}) CHECK(back_transform_correct(th, 0.7, e.coeffs, e.transform) == th);
}

TEST_CASE("lognormal stabilizes with c2 = exp(phi^2) - 1") {
  const double phi = 0.8;
  const auto e = catalog("lognormal", std::vector<double>{phi});
  const double c2 = std::expm1(phi * phi);
  CHECK(e.qvf.c2 == doctest::Approx(c2));
  const double mu = 3.0;
  const double d1 = e.transform.d1g(mu);
  CHECK(d1 * d1 * c2 * mu * mu == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary handling") {
  const auto e = catalog("bernoulli-arcsin");
  bool clamped = false;
  CHECK(clamp_direct_estimate(0.0, 0.12, e.transform, BoundaryMode::kClamp, clamped) == doctest::Approx(0.03));
  CHECK(clamped);
  CHECK(clamp_direct_estimate(1.0, 0.12, e.transform, BoundaryMode::kClamp, clamped) == doctest::Approx(0.97));
  CHECK(clamp_direct_estimate(0.4, 0.12, e.transform, BoundaryMode::kClamp, clamped) == 0.4);
  CHECK_FALSE(clamped);
  CHECK_THROWS_AS(clamp_direct_estimate(1.0, 0.12, e.transform, BoundaryMode::kReject, clamped), DomainError);
  CHECK_THROWS_AS(curvature_ratio(e.transform, 0.0), DomainError);
  CHECK_THROWS_AS(back_transform_correct(2.0, 0.1, e.coeffs, e.transform, BoundaryMode::kReject), DomainError);
  CHECK(back_transform_correct(2.0, 0.1, e.coeffs, e.transform) ==
        back_transform_correct(M_PI / 2, 0.1, e.coeffs, e.transform));
}

TEST_CASE("invalid catalog requests") {
  CHECK_THROWS_AS(catalog("binomial-logit"), InputError);
  CHECK_THROWS_AS(catalog("negbinomial"), InputError);
  CHECK_THROWS_AS(catalog("negbinomial", std::vector<double>{-1.0}), InputError);
  CHECK_THROWS_AS(catalog("poisson-sqrt", std::vector<double>{2.0}), InputError);
  QuadraticVarianceFunction zero;
  zero.mean_domain = {0.0, 1.0};
  CHECK_THROWS_AS(zero.validate(), InputError);
  const auto g = catalog("gamma-log", std::vector<double>{1.0});
  CHECK_THROWS_AS(g.coeffs.multiplier(2.0), DomainError);
}
