#pragma once

#include <cstddef>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/fh_core.hpp"
#include "vstsae/transforms.hpp"

namespace vstsae {

inline constexpr std::size_t kDefaultQuadratureNodes = 40;

/// Normal(center, variance) law of theta_i given z_i with lambda plugged in.
struct PosteriorSpec {
  double center = 0.0;
  double variance = 0.0;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;

  void validate() const;
};

/// Counters for evaluations pushed back inside hard bounds.
struct ClampCounter {
  std::size_t quadrature_nodes = 0;
  std::size_t estimates = 0;
};

/// How to evaluate moments of g_inv(theta): closed form when the transform
/// has one, Gauss-Hermite otherwise. kQuadrature forces the latter.
enum class MomentRoute { kAuto, kQuadrature };

/// E[g_inv(theta)], theta ~ Normal(center, variance).
double posterior_mean_inverse(const PosteriorSpec& spec, const Transform& t, MomentRoute route = MomentRoute::kAuto,
                              ClampCounter* clamps = nullptr);

/// Var[g_inv(theta)], theta ~ Normal(center, variance).
double posterior_variance_inverse(const PosteriorSpec& spec, const Transform& t,
                                  MomentRoute route = MomentRoute::kAuto, ClampCounter* clamps = nullptr);

struct AreaEstimate {
  double direct = 0.0;
  double nbt = 0.0;  // g_inv(theta_eb)
  double peb = 0.0;  // E[g_inv(theta) | z], i.e. assuming theta = g(mu)
  double eb = 0.0;   // (peb - D b/2) / (1 + a D/2)
};

struct EstimateBundle {
  std::vector<AreaEstimate> areas;
  VarianceMethod method = VarianceMethod::kREML;
  ClampCounter clamps;
};

EstimateBundle point_estimates(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                               const LinearDeltaCoeffs& coeffs, std::size_t quadrature_nodes = kDefaultQuadratureNodes);

}  // namespace vstsae
