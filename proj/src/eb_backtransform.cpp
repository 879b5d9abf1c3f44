#include "vstsae/eb_backtransform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "vstsae/errors.hpp"
#include "vstsae/quadrature.hpp"

namespace vstsae {

namespace {

// Nodes whose normalized weight is below this contribute nothing at double
// precision; clamping them is not worth a warning.
constexpr double kNegligibleWeight = 1e-15;

template <class F>
double gh_expectation(const PosteriorSpec& spec, const Transform& t, ClampCounter* clamps, F&& map) {
  const GaussHermiteRule& rule = gauss_hermite(spec.quadrature_nodes);
  const double scale = std::sqrt(2.0 * spec.variance);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    double theta = spec.center + scale * rule.nodes[k];
    const double w = rule.weights[k] * norm;
    if (!t.inverse_extends_range && (theta < t.range.lo || theta > t.range.hi)) {
      theta = t.range.clamp(theta);
      if (clamps != nullptr && w > kNegligibleWeight) ++clamps->quadrature_nodes;
    }
    acc += w * map(t.g_inv(theta));
  }
  return acc;
}

}  // namespace

void PosteriorSpec::validate() const {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw InputError(fmt::format("posterior variance must be >= 0, got {}", variance));
  }
  if (!std::isfinite(center)) throw InputError("posterior center is not finite");
  if (quadrature_nodes < 8) {
    throw InputError(fmt::format("need at least 8 quadrature nodes, got {}", quadrature_nodes));
  }
}

double posterior_mean_inverse(const PosteriorSpec& spec, const Transform& t, MomentRoute route, ClampCounter* clamps) {
  spec.validate();
  if (spec.variance == 0.0) return t.g_inv(t.range.clamp(spec.center));
  if (route == MomentRoute::kAuto && t.posterior_mean) return t.posterior_mean(spec.center, spec.variance);
  return gh_expectation(spec, t, clamps, [](double v) { return v; });
}

double posterior_variance_inverse(const PosteriorSpec& spec, const Transform& t, MomentRoute route,
                                  ClampCounter* clamps) {
  spec.validate();
  if (spec.variance == 0.0) return 0.0;
  if (route == MomentRoute::kAuto && t.posterior_variance) return t.posterior_variance(spec.center, spec.variance);
  // Center on the mean before squaring to avoid cancellation.
  const double mean = gh_expectation(spec, t, clamps, [](double v) { return v; });
  const double var = gh_expectation(spec, t, nullptr, [mean](double v) { return (v - mean) * (v - mean); });
  return std::max(var, 0.0);
}

EstimateBundle point_estimates(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                               const LinearDeltaCoeffs& coeffs, std::size_t quadrature_nodes) {
  if (fit.theta_eb.size() != ds.m()) {
    throw InputError(fmt::format("fit has {} areas but dataset has {}", fit.theta_eb.size(), ds.m()));
  }
  EstimateBundle bundle;
  bundle.method = fit.method;
  bundle.areas.resize(ds.m());
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const double D = ds[i].D;
    const double theta = fit.theta_eb[i];
    AreaEstimate& e = bundle.areas[i];
    e.direct = ds[i].y_direct;
    e.nbt = t.g_inv(t.range.clamp(theta));
    const PosteriorSpec spec{theta, g1(fit.A_hat, D), quadrature_nodes};
    e.peb = posterior_mean_inverse(spec, t, MomentRoute::kAuto, &bundle.clamps);
    e.eb = coeffs.multiplier(D) * (e.peb - D * coeffs.b / 2.0);
    // Only scales with hard bounds (proportions, counts) are clamped.
    const double bounded = std::clamp(e.eb, t.domain.lo, t.domain.hi);
    if (bounded != e.eb) {
      e.eb = bounded;
      ++bundle.clamps.estimates;
    }
  }
  return bundle;
}

}  // namespace vstsae
