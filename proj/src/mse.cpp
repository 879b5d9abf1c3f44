#include "vstsae/mse.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "vstsae/errors.hpp"
#include "vstsae/parallel.hpp"
#include "vstsae/rng.hpp"

namespace vstsae {

std::vector<double> m1_star(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                            std::size_t quadrature_nodes) {
  std::vector<double> out(ds.m());
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const PosteriorSpec spec{fit.theta_eb[i], g1(fit.A_hat, ds[i].D), quadrature_nodes};
    out[i] = posterior_variance_inverse(spec, t);
  }
  return out;
}

std::vector<double> m1_estimate(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                const LinearDeltaCoeffs& coeffs, std::size_t quadrature_nodes) {
  std::vector<double> out = m1_star(ds, fit, t, quadrature_nodes);
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const double mult = coeffs.multiplier(ds[i].D);
    out[i] *= mult * mult;
  }
  return out;
}

void draw_bootstrap_response(const ModelData& data, const Eigen::VectorXd& beta, double A, Engine& rng,
                             std::vector<double>& theta_out, std::vector<double>& z_out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd_u = std::sqrt(A);
  theta_out.resize(data.m);
  z_out.resize(data.m);
  for (std::size_t i = 0; i < data.m; ++i) {
    double synth = 0.0;
    for (std::size_t j = 0; j < data.p; ++j) synth += data.x(i, j) * beta[static_cast<Eigen::Index>(j)];
    theta_out[i] = synth + sd_u * normal(rng);
    z_out[i] = theta_out[i] + std::sqrt(data.D[i]) * normal(rng);
  }
}

MseEstimate ms_estimate(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                        const LinearDeltaCoeffs& coeffs, const BootstrapOptions& opts) {
  if (opts.B < 50) throw InputError(fmt::format("MSE bootstrap needs B >= 50, got {}", opts.B));
  const std::size_t m = ds.m();
  const std::size_t B = opts.B;
  const ModelData data = ds.model_data();

  // Per-replicate rows, filled independently and reduced in replicate order.
  std::vector<double> m1_rows(B * m), sq_rows(B * m);
  std::vector<char> ok(B, 0);
  OptimizerOptions oo;
  oo.track_reml_zero = false;

  parallel_for(B, opts.workers, [&](std::size_t b) {
    Engine rng = make_stream(opts.seed, {b});
    std::vector<double> theta_star, z_star;
    draw_bootstrap_response(data, fit.beta_hat, fit.A_hat, rng, theta_star, z_star);
    const ModelData boot = ds.model_data(z_star);
    ModelFit refit;
    try {
      refit = fit_model(boot, fit.method, oo);
    } catch (const NumericalError&) {
      return;
    } catch (const DomainError&) {
      return;
    }
    const std::vector<double> theta_plugin = eblup_theta(boot, fit.beta_hat, fit.A_hat);
    for (std::size_t i = 0; i < m; ++i) {
      const double D = ds[i].D;
      const PosteriorSpec star{refit.theta_eb[i], g1(refit.A_hat, D), opts.quadrature_nodes};
      const PosteriorSpec plugin{theta_plugin[i], g1(fit.A_hat, D), opts.quadrature_nodes};
      m1_rows[b * m + i] = posterior_variance_inverse(star, t);
      const double diff = posterior_mean_inverse(star, t) - posterior_mean_inverse(plugin, t);
      sq_rows[b * m + i] = diff * diff;
    }
    ok[b] = 1;
  });

  MseEstimate est;
  est.bootstrap_B = B;
  std::size_t used = 0;
  for (char flag : ok) used += flag != 0;
  est.failures = B - used;
  if (static_cast<double>(est.failures) > kMaxBootstrapFailureRate * static_cast<double>(B)) {
    throw BootstrapBudgetError(
        fmt::format("{} of {} MSE bootstrap refits failed (limit {:.0f}%)", est.failures, B, 100 * kMaxBootstrapFailureRate));
  }

  const std::vector<double> m1s = m1_star(ds, fit, t, opts.quadrature_nodes);
  est.m1.resize(m);
  est.ms.resize(m);
  est.pms.resize(m);
  est.multiplier.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double mean_m1 = 0.0, mean_sq = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      if (!ok[b]) continue;
      mean_m1 += m1_rows[b * m + i];
      mean_sq += sq_rows[b * m + i];
    }
    mean_m1 /= static_cast<double>(used);
    mean_sq /= static_cast<double>(used);
    double corrected = 2.0 * m1s[i] - mean_m1 + mean_sq;
    const double floor = kMseFloorFraction * m1s[i];
    if (corrected < floor) {
      corrected = floor;
      ++est.floored;
    }
    const double mult = coeffs.multiplier(ds[i].D);
    est.multiplier[i] = mult * mult;
    est.m1[i] = m1s[i] * est.multiplier[i];
    est.pms[i] = corrected;
    est.ms[i] = corrected * est.multiplier[i];
  }
  return est;
}

}  // namespace vstsae
