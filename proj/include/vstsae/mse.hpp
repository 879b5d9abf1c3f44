#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/eb_backtransform.hpp"
#include "vstsae/fh_core.hpp"
#include "vstsae/rng.hpp"
#include "vstsae/transforms.hpp"

namespace vstsae {

inline constexpr std::size_t kDefaultMseBootstrap = 100;
inline constexpr double kMseFloorFraction = 1e-3;
inline constexpr double kMaxBootstrapFailureRate = 0.10;

/// Per-area MSE estimates for the EB estimator (squared original-scale units).
struct MseEstimate {
  std::vector<double> m1;          // leading term, with multiplier
  std::vector<double> ms;          // bootstrap bias-corrected, with multiplier
  std::vector<double> pms;         // ms without the multiplier
  std::vector<double> multiplier;  // (1 + a D/2)^{-2}
  std::size_t bootstrap_B = 0;
  std::size_t failures = 0;  // bootstrap refits skipped
  std::size_t floored = 0;   // areas raised to the positivity floor
};

struct BootstrapOptions {
  std::size_t B = kDefaultMseBootstrap;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
};

/// Var[g_inv(theta) | z] under Normal(theta_eb_i, g1(A_hat, D_i)), no multiplier.
std::vector<double> m1_star(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                            std::size_t quadrature_nodes = kDefaultQuadratureNodes);

/// m1_i = m1_star_i * (1 + a D_i/2)^{-2}.
std::vector<double> m1_estimate(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                const LinearDeltaCoeffs& coeffs,
                                std::size_t quadrature_nodes = kDefaultQuadratureNodes);

/// Parametric-bootstrap additive bias correction of the leading term:
///
///   Ms* = 2 M1*(lambda) - mean_b M1*(lambda*_b)
///         + mean_b (mu_EB(lambda*_b; z*_b) - mu_B(lambda; z*_b))^2
///
/// with bootstrap data drawn from the fitted transformed-scale model and each
/// replicate refit with fit.method. Replicate b draws from the stream
/// (opts.seed, b), so results do not depend on opts.workers. Also fills m1.
/// Throws BootstrapBudgetError when more than 10% of refits fail.
MseEstimate ms_estimate(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                        const LinearDeltaCoeffs& coeffs, const BootstrapOptions& opts);

/// Draws one bootstrap response z* from the fitted model into `out`.
void draw_bootstrap_response(const ModelData& data, const Eigen::VectorXd& beta, double A, Engine& rng,
                             std::vector<double>& theta_out, std::vector<double>& z_out);

}  // namespace vstsae
