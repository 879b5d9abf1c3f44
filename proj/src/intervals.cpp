#include "vstsae/intervals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "vstsae/errors.hpp"
#include "vstsae/mse.hpp"
#include "vstsae/parallel.hpp"
#include "vstsae/rng.hpp"

namespace vstsae {

namespace {

constexpr std::array<IntervalMethod, 6> kMethods = {
    IntervalMethod::kTDirect, IntervalMethod::kTEB_YL, IntervalMethod::kBoot,
    IntervalMethod::kTEB_B,   IntervalMethod::kpTEB_B, IntervalMethod::kMpnaive,
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InputError(fmt::format("alpha must lie in (0, 1/2), got {}", alpha));
}

std::size_t order_statistic_rank(std::size_t n, double prob) {
  const auto r = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * prob - 1e-12));
  return std::clamp<std::size_t>(r, 1, n);
}

Interval symmetric(double center, double half, IntervalMethod method, double alpha, bool transformed) {
  return {center - half, center + half, method, alpha, false, transformed};
}

}  // namespace

std::span<const IntervalMethod> all_interval_methods() { return kMethods; }

std::string_view interval_name(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::kTDirect:
      return "TDirect";
    case IntervalMethod::kTEB_YL:
      return "TEB.YL";
    case IntervalMethod::kBoot:
      return "Boot";
    case IntervalMethod::kTEB_B:
      return "TEB.B";
    case IntervalMethod::kpTEB_B:
      return "pTEB.B";
    case IntervalMethod::kMpnaive:
      return "Mpnaive";
  }
  return "?";
}

IntervalMethod parse_interval(std::string_view name) {
  for (IntervalMethod m : kMethods) {
    if (interval_name(m) == name) return m;
  }
  if (name == "TEB_YL") return IntervalMethod::kTEB_YL;
  if (name == "TEB_B") return IntervalMethod::kTEB_B;
  if (name == "pTEB_B") return IntervalMethod::kpTEB_B;
  throw InputError(fmt::format("unknown interval method '{}'", name));
}

double normal_critical_value(double alpha) {
  check_alpha(alpha);
  static const boost::math::normal standard;
  return boost::math::quantile(boost::math::complement(standard, alpha / 2.0));
}

Interval transform_interval(const Interval& transformed, double sampling_variance, const LinearDeltaCoeffs& coeffs,
                            const Transform& t, BoundaryMode mode) {
  Interval out = transformed;
  out.transformed_scale = false;
  out.lower = back_transform_correct(transformed.lower, sampling_variance, coeffs, t, mode);
  out.upper = back_transform_correct(transformed.upper, sampling_variance, coeffs, t, mode);
  if (out.lower > out.upper) {
    throw DomainError(fmt::format("{}: mapped interval is inverted ({} > {}); check a, b", t.name, out.lower,
                                  out.upper));
  }
  return out;
}

Interval plain_inverse_interval(const Interval& transformed, const Transform& t) {
  Interval out = transformed;
  out.transformed_scale = false;
  out.lower = t.g_inv(t.range.clamp(transformed.lower));
  out.upper = t.g_inv(t.range.clamp(transformed.upper));
  return out;
}

RootQuantiles bootstrap_root_quantiles(const AreaDataset& ds, const ModelFit& fit, double alpha, std::size_t B,
                                       std::uint64_t seed, std::size_t workers) {
  check_alpha(alpha);
  if (B < kMinIntervalBootstrap) {
    throw InputError(fmt::format("bootstrap intervals need B >= {}, got {}", kMinIntervalBootstrap, B));
  }
  const std::size_t m = ds.m();
  const ModelData data = ds.model_data();
  std::vector<double> roots(B * m);
  std::vector<char> ok(B, 0);
  OptimizerOptions oo;
  oo.track_reml_zero = false;

  parallel_for(B, workers, [&](std::size_t b) {
    Engine rng = make_stream(seed, {b});
    std::vector<double> theta_star, z_star;
    draw_bootstrap_response(data, fit.beta_hat, fit.A_hat, rng, theta_star, z_star);
    ModelFit refit;
    try {
      refit = fit_model(ds.model_data(z_star), fit.method, oo);
    } catch (const NumericalError&) {
      return;
    } catch (const DomainError&) {
      return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double scale = std::sqrt(g1(refit.A_hat, ds[i].D));
      if (!(scale > 0.0)) return;  // zero A*: root undefined, count as failure
      roots[b * m + i] = (theta_star[i] - refit.theta_eb[i]) / scale;
    }
    ok[b] = 1;
  });

  RootQuantiles q;
  q.B = B;
  std::size_t used = 0;
  for (char f : ok) used += f != 0;
  q.failures = B - used;
  if (static_cast<double>(q.failures) > kMaxBootstrapFailureRate * static_cast<double>(B)) {
    throw BootstrapBudgetError(fmt::format("{} of {} interval bootstrap refits failed", q.failures, B));
  }
  const std::size_t lo_rank = order_statistic_rank(used, alpha / 2.0);
  const std::size_t hi_rank = order_statistic_rank(used, 1.0 - alpha / 2.0);
  q.lower.resize(m);
  q.upper.resize(m);
  std::vector<double> column;
  column.reserve(used);
  for (std::size_t i = 0; i < m; ++i) {
    column.clear();
    for (std::size_t b = 0; b < B; ++b) {
      if (ok[b]) column.push_back(roots[b * m + i]);
    }
    std::sort(column.begin(), column.end());
    q.lower[i] = column[lo_rank - 1];
    q.upper[i] = column[hi_rank - 1];
  }
  return q;
}

std::vector<Interval> intervals_from_root_quantiles(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                                    const LinearDeltaCoeffs& coeffs, const RootQuantiles& q,
                                                    double alpha, bool with_multiplier) {
  std::vector<Interval> out(ds.m());
  const IntervalMethod method = with_multiplier ? IntervalMethod::kTEB_B : IntervalMethod::kpTEB_B;
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const double s = std::sqrt(g1(fit.A_hat, ds[i].D));
    const Interval tr{fit.theta_eb[i] + q.lower[i] * s, fit.theta_eb[i] + q.upper[i] * s, method, alpha, false, true};
    out[i] = with_multiplier ? transform_interval(tr, ds[i].D, coeffs, t) : plain_inverse_interval(tr, t);
  }
  return out;
}

double naive_direct_sd(const AreaObservation& obs, double eb, const Transform& t) {
  if (t.family == Family::kBernoulliArcsin) {
    const double y = obs.y_direct;
    const double var = (y <= 0.0 || y >= 1.0) ? obs.sum_w2 / (4.0 * obs.n) : y * (1.0 - y) * obs.sum_w2;
    return std::sqrt(var);
  }
  return std::sqrt(obs.D) / t.d1g(eb);
}

std::vector<Interval> build_interval(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                     const LinearDeltaCoeffs& coeffs, IntervalMethod method,
                                     const IntervalOptions& opts) {
  check_alpha(opts.alpha);
  const double zc = normal_critical_value(opts.alpha);
  const std::size_t m = ds.m();
  std::vector<Interval> out(m);

  switch (method) {
    case IntervalMethod::kTDirect:
      for (std::size_t i = 0; i < m; ++i) {
        const auto tr = symmetric(ds[i].z, zc * std::sqrt(ds[i].D), method, opts.alpha, true);
        out[i] = transform_interval(tr, ds[i].D, coeffs, t);
      }
      break;
    case IntervalMethod::kTEB_YL:
      if (fit.method != VarianceMethod::kYL) throw InputError("TEB.YL requires a fit with the YL variance method");
      for (std::size_t i = 0; i < m; ++i) {
        const auto tr = symmetric(fit.theta_eb[i], zc * std::sqrt(g1(fit.A_hat, ds[i].D)), method, opts.alpha, true);
        out[i] = transform_interval(tr, ds[i].D, coeffs, t);
      }
      break;
    case IntervalMethod::kBoot: {
      const EstimateBundle est = point_estimates(ds, fit, t, coeffs, opts.quadrature_nodes);
      const std::vector<double> m1 = m1_estimate(ds, fit, t, coeffs, opts.quadrature_nodes);
      for (std::size_t i = 0; i < m; ++i) {
        out[i] = symmetric(est.areas[i].eb, zc * std::sqrt(m1[i]), method, opts.alpha, false);
      }
      break;
    }
    case IntervalMethod::kTEB_B:
    case IntervalMethod::kpTEB_B: {
      if (fit.method != VarianceMethod::kLL) throw InputError("TEB.B / pTEB.B require a fit with the LL variance method");
      const RootQuantiles q = bootstrap_root_quantiles(ds, fit, opts.alpha, opts.B, opts.seed, opts.workers);
      out = intervals_from_root_quantiles(ds, fit, t, coeffs, q, opts.alpha, method == IntervalMethod::kTEB_B);
      break;
    }
    case IntervalMethod::kMpnaive: {
      const EstimateBundle est = point_estimates(ds, fit, t, coeffs, opts.quadrature_nodes);
      for (std::size_t i = 0; i < m; ++i) {
        const double sd = naive_direct_sd(ds[i], est.areas[i].eb, t);
        out[i] = symmetric(ds[i].y_direct, zc * sd, method, opts.alpha, false);
      }
      break;
    }
  }
  return out;
}

Interval yates_correct(const Interval& iv, double w_median, const Bounds& hard_bounds) {
  Interval out = iv;
  out.lower = hard_bounds.clamp(iv.lower - w_median / 2.0);
  out.upper = hard_bounds.clamp(iv.upper + w_median / 2.0);
  out.yates_applied = true;
  return out;
}

double length_gap_leading_term(double z, double sampling_variance, double theta_eb, double A_hat,
                               const Transform& t, double alpha) {
  const double zc = normal_critical_value(alpha);
  const double sd = std::sqrt(sampling_variance);
  const double sg = std::sqrt(g1(A_hat, sampling_variance));
  return 2.0 * zc * ((sd - sg) * t.d1g_inv(theta_eb) + sd * (z - theta_eb) * t.d2g_inv(theta_eb));
}

LengthPair transformed_lengths(double z, double sampling_variance, double theta_eb, double A_hat,
                               const Transform& t, const LinearDeltaCoeffs& coeffs, double alpha) {
  const double zc = normal_critical_value(alpha);
  const double hd = zc * std::sqrt(sampling_variance);
  const double he = zc * std::sqrt(g1(A_hat, sampling_variance));
  const Interval td =
      transform_interval({z - hd, z + hd, IntervalMethod::kTDirect, alpha, false, true}, sampling_variance, coeffs, t);
  const Interval teb = transform_interval({theta_eb - he, theta_eb + he, IntervalMethod::kTEB_YL, alpha, false, true},
                                          sampling_variance, coeffs, t);
  return {td.length(), teb.length()};
}

bool shorter_teb_predicate(double z, double theta_eb, const Transform& t) {
  if (!(t.d1g_inv(theta_eb) > 0.0)) return false;
  const double curvature = t.d2g_inv(theta_eb);
  return (curvature > 0.0 && z > theta_eb) || (curvature < 0.0 && z < theta_eb);
}

}  // namespace vstsae
