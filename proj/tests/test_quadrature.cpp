#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vstsae/errors.hpp"
#include "vstsae/quadrature.hpp"

using namespace vstsae;

TEST_CASE("Gauss-Hermite rule reproduces low moments of exp(-x^2)") {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (std::size_t n : {1u, 2u, 5u, 20u, 40u, 64u}) {
    const auto rule = make_gauss_hermite(n);
    double w = 0.0, x2 = 0.0, x4 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      w += rule.weights[k];
      x2 += rule.weights[k] * rule.nodes[k] * rule.nodes[k];
      x4 += rule.weights[k] * std::pow(rule.nodes[k], 4);
    }
    INFO("n=" << n);
    CHECK(w == doctest::Approx(sqrt_pi).epsilon(1e-13));
    if (n >= 2) CHECK(x2 == doctest::Approx(sqrt_pi / 2).epsilon(1e-13));
    if (n >= 3) CHECK(x4 == doctest::Approx(3 * sqrt_pi / 4).epsilon(1e-13));
  }
}

TEST_CASE("nodes ascend and are symmetric") {
  const auto rule = make_gauss_hermite(11);
  for (std::size_t k = 1; k < 11; ++k) CHECK(rule.nodes[k] > rule.nodes[k - 1]);
  for (std::size_t k = 0; k < 11; ++k) {
    CHECK(rule.nodes[k] == doctest::Approx(-rule.nodes[10 - k]).epsilon(1e-14));
    CHECK(rule.weights[k] == doctest::Approx(rule.weights[10 - k]).epsilon(1e-14));
  }
  CHECK(std::abs(rule.nodes[5]) < 1e-15);
}

TEST_CASE("two-node rule is exact") {
  const auto rule = make_gauss_hermite(2);
  CHECK(rule.nodes[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-15));
}

TEST_CASE("normal expectations of polynomials and exp") {
  const auto& rule = gauss_hermite(40);
  const double c = 0.3, v = 0.7;
  CHECK(normal_expectation([](double t) { return t; }, c, v, rule) == doctest::Approx(c).epsilon(1e-14));
  CHECK(normal_expectation([](double t) { return t * t; }, c, v, rule) == doctest::Approx(c * c + v).epsilon(1e-13));
  CHECK(normal_expectation([](double t) { return std::exp(t); }, c, v, rule) ==
        doctest::Approx(std::exp(c + v / 2)).epsilon(1e-13));
  CHECK(normal_expectation([](double t) { return std::sin(t); }, c, v, rule) ==
        doctest::Approx(std::sin(c) * std::exp(-v / 2)).epsilon(1e-13));
}

TEST_CASE("cached rules are shared") {
  CHECK(&gauss_hermite(24) == &gauss_hermite(24));
  CHECK_THROWS_AS(make_gauss_hermite(0), InputError);
}
