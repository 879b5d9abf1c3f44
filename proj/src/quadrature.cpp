#include "vstsae/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "vstsae/errors.hpp"

namespace vstsae {

GaussHermiteRule make_gauss_hermite(std::size_t n) {
  if (n == 0) throw InputError("Gauss-Hermite rule needs at least one node");
  constexpr int kMaxIter = 100;
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const std::size_t half = (n + 1) / 2;
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double nd = static_cast<double>(n);

  double z = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    // Initial guesses for the largest roots, then extrapolate from the previous two.
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }

    double pp = 0.0;
    int iter = 0;
    for (; iter < kMaxIter; ++iter) {
      // Orthonormal Hermite recurrence.
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (iter == kMaxIter) {
      throw NumericalError(fmt::format("Gauss-Hermite root {} of {} did not converge", i, n));
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  // Stored largest-first above; flip to ascending order.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

const GaussHermiteRule& gauss_hermite(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(make_gauss_hermite(n));
  return *slot;
}

double normal_expectation(const std::function<double(double)>& f, double center, double variance,
                          const GaussHermiteRule& rule) {
  if (variance == 0.0) return f(center);
  const double scale = std::sqrt(2.0 * variance);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    acc += rule.weights[k] * f(center + scale * rule.nodes[k]);
  }
  return acc / std::sqrt(std::numbers::pi);
}

}  // namespace vstsae
