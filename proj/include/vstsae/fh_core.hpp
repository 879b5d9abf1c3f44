#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vstsae/dataset.hpp"

namespace vstsae {

/// How the variance component A is estimated.
///  - kREML: restricted likelihood, truncated at zero.
///  - kYL:   restricted likelihood times h(A) = [arctan(sum_i A/(A+D_i))]^{1/m}.
///  - kLL:   restricted likelihood times A.
/// The two adjusted forms never return zero.
enum class VarianceMethod { kREML, kYL, kLL };

std::string_view method_name(VarianceMethod method);
VarianceMethod parse_method(std::string_view name);

struct OptimizerOptions {
  int bits = 32;  // Brent tolerance ~ 2^(1-bits), relative
  int max_iterations = 200;
  bool track_reml_zero = true;  // for YL/LL, also run plain REML to fill reml_was_zero
};

struct VarianceEstimate {
  double A_hat = 0.0;
  bool reml_was_zero = false;
  double A_max = 0.0;
  int iterations = 0;
};

struct ModelFit {
  Eigen::VectorXd beta_hat;
  double A_hat = 0.0;
  VarianceMethod method = VarianceMethod::kREML;
  std::vector<double> gamma;
  std::vector<double> theta_eb;
  bool reml_was_zero = false;
  double A_max = 0.0;
};

/// A*D/(A+D), the posterior variance of theta given z under known (beta, A).
inline double g1(double A, double D) { return A + D > 0.0 ? A * D / (A + D) : 0.0; }

/// beta(A) = (X'V^{-1}X)^{-1} X'V^{-1} z with V = diag(A + D_i).
Eigen::VectorXd fit_gls_beta(const ModelData& data, double A);

/// -1/2 [ sum_i log(A + D_i) + log det(X'V^{-1}X) + z'Pz ].
/// Omits the A-free constant -(m-p)/2 log(2 pi) + 1/2 log det(X'X).
double restricted_loglik(const ModelData& data, double A);

/// Objective maximized by `method`: restricted_loglik plus the log adjustment.
double adjusted_loglik(const ModelData& data, double A, VarianceMethod method);

/// Search ceiling max(10 * sample variance of z, 1).
double default_A_max(const ModelData& data);

VarianceEstimate estimate_A(const ModelData& data, VarianceMethod method, const OptimizerOptions& opts = {});

/// theta_i = x_i'beta + gamma_i (z_i - x_i'beta), gamma_i = A/(A + D_i).
std::vector<double> eblup_theta(const ModelData& data, const Eigen::VectorXd& beta, double A);

/// Full fit: A, beta(A), shrinkage factors, EBLUPs.
ModelFit fit_model(const ModelData& data, VarianceMethod method, const OptimizerOptions& opts = {});

}  // namespace vstsae
