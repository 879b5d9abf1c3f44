#include "vstsae/fh_core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "vstsae/errors.hpp"
#include "vstsae/kernels/kernels.hpp"

namespace vstsae {

namespace {

// Weighted normal equations at a given A.
struct Normal {
  Eigen::MatrixXd xvx;  // X'V^{-1}X
  Eigen::VectorXd xvz;  // X'V^{-1}z
  double zvz = 0.0;     // z'V^{-1}z
};

Normal weighted_normal_equations(const ModelData& data, double A) {
  const std::size_t p = data.p;
  Normal ne{Eigen::MatrixXd(p, p), Eigen::VectorXd(p), 0.0};
  std::vector<double> scratch(data.m);
  kernels::WeightedMoments out{{ne.xvx.data(), p * p}, {ne.xvz.data(), p}, 0.0};
  // xvx is column-major; the kernel writes a symmetric matrix so layout is moot.
  kernels::weighted_moments(A, data.D, data.z, data.x_colmajor, p, scratch, out);
  ne.zvz = out.zz;
  return ne;
}

[[noreturn]] void throw_rank_deficient(const ModelData& data, double A) {
  Eigen::MatrixXd xw(data.m, data.p);
  for (std::size_t i = 0; i < data.m; ++i) {
    const double s = 1.0 / std::sqrt(A + data.D[i]);
    for (std::size_t j = 0; j < data.p; ++j) xw(i, j) = s * data.x(i, j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  qr.setThreshold(1e-10);
  std::vector<Eigen::Index> offending;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) offending.push_back(perm[k]);
  throw NumericalError(fmt::format("X'V^-1X is singular at A = {} (rank {} < p = {}); dependent column indices: {}", A,
                                   qr.rank(), data.p, fmt::join(offending, ", ")));
}

Eigen::LDLT<Eigen::MatrixXd> factor(const Normal& ne, const ModelData& data, double A) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(ne.xvx);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw_rank_deficient(data, A);
  const auto diag = ldlt.vectorD();
  const double scale = diag.cwiseAbs().maxCoeff();
  if (!(diag.minCoeff() > 1e-12 * scale)) throw_rank_deficient(data, A);
  return ldlt;
}

void check_variance_arg(const ModelData& data, double A) {
  if (!(A >= 0.0) || !std::isfinite(A)) throw DomainError(fmt::format("variance component must be >= 0, got {}", A));
  for (std::size_t i = 0; i < data.m; ++i) {
    if (!(A + data.D[i] > 0.0)) throw DomainError(fmt::format("A + D_{} is not positive", i));
  }
}

}  // namespace

std::string_view method_name(VarianceMethod method) {
  switch (method) {
    case VarianceMethod::kREML:
      return "REML";
    case VarianceMethod::kYL:
      return "YL";
    case VarianceMethod::kLL:
      return "LL";
  }
  return "?";
}

VarianceMethod parse_method(std::string_view name) {
  if (name == "REML" || name == "reml" || name == "RE") return VarianceMethod::kREML;
  if (name == "YL" || name == "yl") return VarianceMethod::kYL;
  if (name == "LL" || name == "ll") return VarianceMethod::kLL;
  throw InputError(fmt::format("unknown variance method '{}' (expected REML, YL or LL)", name));
}

Eigen::VectorXd fit_gls_beta(const ModelData& data, double A) {
  check_variance_arg(data, A);
  const Normal ne = weighted_normal_equations(data, A);
  return factor(ne, data, A).solve(ne.xvz);
}

double restricted_loglik(const ModelData& data, double A) {
  check_variance_arg(data, A);
  const Normal ne = weighted_normal_equations(data, A);
  const auto ldlt = factor(ne, data, A);
  const Eigen::VectorXd beta = ldlt.solve(ne.xvz);
  const double quad = ne.zvz - ne.xvz.dot(beta);  // z'Pz
  double log_det_v = 0.0;
  for (double d : data.D) log_det_v += std::log(A + d);
  const double log_det_xvx = ldlt.vectorD().array().log().sum();
  return -0.5 * (log_det_v + log_det_xvx + quad);
}

double adjusted_loglik(const ModelData& data, double A, VarianceMethod method) {
  const double base = restricted_loglik(data, A);
  switch (method) {
    case VarianceMethod::kREML:
      return base;
    case VarianceMethod::kYL: {
      double trace = 0.0;
      for (double d : data.D) trace += A / (A + d);
      return base + std::log(std::atan(trace)) / static_cast<double>(data.m);
    }
    case VarianceMethod::kLL:
      return base + std::log(A);
  }
  return base;
}

double default_A_max(const ModelData& data) {
  double mean = 0.0;
  for (double v : data.z) mean += v;
  mean /= static_cast<double>(data.m);
  double ss = 0.0;
  for (double v : data.z) ss += (v - mean) * (v - mean);
  const double var = data.m > 1 ? ss / static_cast<double>(data.m - 1) : 0.0;
  return std::max(10.0 * var, 1.0);
}

VarianceEstimate estimate_A(const ModelData& data, VarianceMethod method, const OptimizerOptions& opts) {
  if (data.m <= data.p) {
    throw InputError(fmt::format("need m > p to estimate A (m = {}, p = {})", data.m, data.p));
  }
  VarianceEstimate est;
  est.A_max = default_A_max(data);

  auto negated = [&](double A) {
    const double v = adjusted_loglik(data, A, method);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(opts.max_iterations);
  const auto [a_opt, f_opt] = boost::math::tools::brent_find_minima(negated, 0.0, est.A_max, opts.bits, iters);
  est.iterations = static_cast<int>(iters);
  if (iters >= static_cast<std::uintmax_t>(opts.max_iterations)) {
    throw NumericalError(fmt::format("{} optimizer did not converge in {} iterations on bracket [0, {}]; last A = {}",
                                     method_name(method), opts.max_iterations, est.A_max, a_opt));
  }

  if (method == VarianceMethod::kREML) {
    // Brent never evaluates the endpoint; a boundary maximum shows up as
    // f(0) >= f(A_opt) with A_opt within tolerance of zero.
    const double at_zero = restricted_loglik(data, 0.0);
    if (at_zero >= -f_opt) {
      est.A_hat = 0.0;
      est.reml_was_zero = true;
    } else {
      est.A_hat = a_opt;
    }
    return est;
  }

  if (!(a_opt > 0.0)) {
    throw NumericalError(fmt::format("{} estimate is not positive ({}); bracket [0, {}]", method_name(method), a_opt,
                                     est.A_max));
  }
  est.A_hat = a_opt;
  if (opts.track_reml_zero) {
    OptimizerOptions plain = opts;
    plain.track_reml_zero = false;
    est.reml_was_zero = estimate_A(data, VarianceMethod::kREML, plain).reml_was_zero;
  }
  return est;
}

std::vector<double> eblup_theta(const ModelData& data, const Eigen::VectorXd& beta, double A) {
  std::vector<double> theta(data.m);
  for (std::size_t i = 0; i < data.m; ++i) {
    double synth = 0.0;
    for (std::size_t j = 0; j < data.p; ++j) synth += data.x(i, j) * beta[static_cast<Eigen::Index>(j)];
    const double gamma = A / (A + data.D[i]);
    theta[i] = synth + gamma * (data.z[i] - synth);
  }
  return theta;
}

ModelFit fit_model(const ModelData& data, VarianceMethod method, const OptimizerOptions& opts) {
  const VarianceEstimate est = estimate_A(data, method, opts);
  ModelFit fit;
  fit.A_hat = est.A_hat;
  fit.method = method;
  fit.reml_was_zero = est.reml_was_zero;
  fit.A_max = est.A_max;
  fit.beta_hat = fit_gls_beta(data, est.A_hat);
  fit.gamma.resize(data.m);
  for (std::size_t i = 0; i < data.m; ++i) fit.gamma[i] = est.A_hat / (est.A_hat + data.D[i]);
  fit.theta_eb = eblup_theta(data, fit.beta_hat, est.A_hat);
  return fit;
}

}  // namespace vstsae
