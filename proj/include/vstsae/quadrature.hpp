#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vstsae {

/// Physicists' Gauss-Hermite rule: integral of exp(-x^2) f(x) over the real
/// line is approximated by sum_k weights[k] * f(nodes[k]). Nodes ascend.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes an n-node rule by Newton iteration on the Hermite recurrence.
GaussHermiteRule make_gauss_hermite(std::size_t n);

/// Cached rule for n nodes; thread-safe, returned reference stays valid.
const GaussHermiteRule& gauss_hermite(std::size_t n);

/// E[f(theta)] for theta ~ Normal(center, variance).
double normal_expectation(const std::function<double(double)>& f, double center, double variance,
                          const GaussHermiteRule& rule);

}  // namespace vstsae
