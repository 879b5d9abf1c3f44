#include "vstsae/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "vstsae/errors.hpp"

namespace vstsae {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

constexpr std::array<std::string_view, 7> kFamilies = {
    "bernoulli-arcsin", "poisson-sqrt", "negbinomial", "normal-identity",
    "gamma-log",        "ghs-arcsinh",  "lognormal",
};

// Derivatives of g follow from g' = sqrt(k / V(mu)) with V the quadratic
// variance function; only g and g_inv need per-family forms.
void attach_qvf_derivatives(Transform& t, const QuadraticVarianceFunction& q) {
  const double sk = std::sqrt(q.k);
  const double c0 = q.c0, c1 = q.c1, c2 = q.c2;
  t.d1g = [=](double mu) {
    const double v = c0 + (c1 + c2 * mu) * mu;
    return sk / std::sqrt(v);
  };
  t.d2g = [=](double mu) {
    const double v = c0 + (c1 + c2 * mu) * mu;
    const double dv = c1 + 2.0 * c2 * mu;
    return -0.5 * sk * dv / (v * std::sqrt(v));
  };
  t.d3g = [=](double mu) {
    const double v = c0 + (c1 + c2 * mu) * mu;
    const double dv = c1 + 2.0 * c2 * mu;
    const double sv = std::sqrt(v);
    return sk * (-c2 / (v * sv) + 0.75 * dv * dv / (v * v * sv));
  };
}

double require_positive_shape(std::string_view family, std::span<const double> shape, std::string_view what) {
  if (shape.size() != 1) {
    throw InputError(fmt::format("{} takes exactly one shape parameter ({}), got {}", family, what, shape.size()));
  }
  const double v = shape[0];
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(fmt::format("{}: shape parameter {} must be finite and > 0, got {}", family, what, v));
  }
  return v;
}

void require_no_shape(std::string_view family, std::span<const double> shape) {
  if (!shape.empty()) {
    throw InputError(fmt::format("{} takes no shape parameters, got {}", family, shape.size()));
  }
}

// Moments of exp(theta / s) for theta ~ Normal(c, v).
void attach_exp_moments(Transform& t, double s) {
  t.posterior_mean = [s](double c, double v) { return std::exp(c / s + v / (2.0 * s * s)); };
  t.posterior_variance = [s](double c, double v) {
    const double w = v / (s * s);
    return std::expm1(w) * std::exp(2.0 * c / s + w);
  };
}

}  // namespace

bool Bounds::finite_lo() const noexcept { return std::isfinite(lo); }
bool Bounds::finite_hi() const noexcept { return std::isfinite(hi); }
double Bounds::clamp(double x) const noexcept { return std::clamp(x, lo, hi); }

void QuadraticVarianceFunction::validate() const {
  if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0) {
    throw InputError("quadratic variance function: c0, c1, c2 are all zero");
  }
  if (!(k > 0.0)) {
    throw InputError(fmt::format("quadratic variance function: k must be > 0, got {}", k));
  }
  // Probe the open domain on a grid; infinite ends are probed out to +-1e6.
  const double lo = mean_domain.finite_lo() ? mean_domain.lo : -1e6;
  const double hi = mean_domain.finite_hi() ? mean_domain.hi : 1e6;
  constexpr int kGrid = 1000;
  for (int i = 1; i < kGrid; ++i) {
    const double mu = lo + (hi - lo) * i / kGrid;
    if (!(variance(mu) > 0.0)) {
      throw InputError(fmt::format("quadratic variance function is not positive at mu = {}", mu));
    }
  }
}

double LinearDeltaCoeffs::multiplier(double sampling_variance) const {
  const double denom = 1.0 + a * sampling_variance / 2.0;
  if (denom == 0.0) {
    throw DomainError("back-transform multiplier undefined: 1 + a*D/2 = 0");
  }
  return 1.0 / denom;
}

double Transform::d1g_inv(double theta) const { return 1.0 / d1g(g_inv(theta)); }

double Transform::d2g_inv(double theta) const {
  const double mu = g_inv(theta);
  const double d1 = d1g(mu);
  return -d2g(mu) / (d1 * d1 * d1);
}

std::span<const std::string_view> catalog_families() { return kFamilies; }

std::size_t catalog_shape_arity(std::string_view family_name) {
  if (family_name == "negbinomial" || family_name == "gamma-log" || family_name == "lognormal") return 1;
  return 0;
}

CatalogEntry catalog(std::string_view family_name, std::span<const double> shape) {
  CatalogEntry e;
  Transform& t = e.transform;
  QuadraticVarianceFunction& q = e.qvf;
  t.name = std::string(family_name);

  if (family_name == "bernoulli-arcsin") {
    require_no_shape(family_name, shape);
    t.family = Family::kBernoulliArcsin;
    q = {0.0, 1.0, -1.0, 1.0, {0.0, 1.0}};
    t.g = [](double p) { return std::asin(2.0 * p - 1.0); };
    t.g_inv = [](double th) { return 0.5 * (1.0 + std::sin(th)); };
    t.domain = {0.0, 1.0};
    t.range = {-kHalfPi, kHalfPi};
    t.inverse_extends_range = true;
    t.posterior_mean = [](double c, double v) { return 0.5 * (1.0 + std::sin(c) * std::exp(-0.5 * v)); };
    // Var[(1+sin)/2] = (1/4)[(1 - cos(2c)e^{-2v})/2 - sin^2(c) e^{-v}], rearranged
    // with expm1 so it stays accurate as v -> 0.
    t.posterior_variance = [](double c, double v) {
      const double s = std::sin(c);
      return 0.25 * (-0.5 * std::expm1(-2.0 * v) + s * s * std::exp(-v) * std::expm1(-v));
    };
  } else if (family_name == "poisson-sqrt") {
    require_no_shape(family_name, shape);
    t.family = Family::kPoissonSqrt;
    q = {0.0, 1.0, 0.0, 1.0, {0.0, kInf}};
    t.g = [](double mu) { return 2.0 * std::sqrt(mu); };
    t.g_inv = [](double th) { return 0.25 * th * th; };
    t.domain = {0.0, kInf};
    t.range = {0.0, kInf};
  } else if (family_name == "negbinomial") {
    const double r = require_positive_shape(family_name, shape, "r");
    t.family = Family::kNegBinomial;
    q = {0.0, 1.0, 1.0 / r, 1.0, {0.0, kInf}};
    const double sr = std::sqrt(r);
    t.g = [r, sr](double mu) { return 2.0 * sr * std::asinh(std::sqrt(mu / r)); };
    t.g_inv = [r, sr](double th) {
      const double s = std::sinh(th / (2.0 * sr));
      return r * s * s;
    };
    t.domain = {0.0, kInf};
    t.range = {0.0, kInf};
  } else if (family_name == "normal-identity") {
    require_no_shape(family_name, shape);
    t.family = Family::kNormalIdentity;
    q = {1.0, 0.0, 0.0, 1.0, {-kInf, kInf}};
    t.g = [](double mu) { return mu; };
    t.g_inv = [](double th) { return th; };
    t.domain = {-kInf, kInf};
    t.range = {-kInf, kInf};
    t.posterior_mean = [](double c, double) { return c; };
    t.posterior_variance = [](double, double v) { return v; };
  } else if (family_name == "gamma-log") {
    const double r = require_positive_shape(family_name, shape, "r");
    t.family = Family::kGammaLog;
    q = {0.0, 0.0, 1.0 / r, 1.0, {0.0, kInf}};
    const double sr = std::sqrt(r);
    t.g = [sr](double mu) { return sr * std::log(mu); };
    t.g_inv = [sr](double th) { return std::exp(th / sr); };
    t.domain = {0.0, kInf};
    t.range = {-kInf, kInf};
    attach_exp_moments(t, sr);
  } else if (family_name == "ghs-arcsinh") {
    require_no_shape(family_name, shape);
    t.family = Family::kGhsArcsinh;
    q = {1.0, 0.0, 1.0, 1.0, {-kInf, kInf}};
    t.g = [](double mu) { return std::asinh(mu); };
    t.g_inv = [](double th) { return std::sinh(th); };
    t.domain = {-kInf, kInf};
    t.range = {-kInf, kInf};
    t.posterior_mean = [](double c, double v) { return std::sinh(c) * std::exp(0.5 * v); };
    t.posterior_variance = [](double c, double v) {
      const double s = std::sinh(c);
      return 0.5 * std::expm1(2.0 * v) + s * s * std::exp(v) * std::expm1(v);
    };
  } else if (family_name == "lognormal") {
    const double phi = require_positive_shape(family_name, shape, "phi");
    t.family = Family::kLognormal;
    const double c2 = std::expm1(phi * phi);
    q = {0.0, 0.0, c2, 1.0, {0.0, kInf}};
    const double s = 1.0 / std::sqrt(c2);
    t.g = [s](double mu) { return s * std::log(mu); };
    t.g_inv = [s](double th) { return std::exp(th / s); };
    t.domain = {0.0, kInf};
    t.range = {-kInf, kInf};
    attach_exp_moments(t, s);
  } else {
    throw InputError(fmt::format("unknown transform family '{}'", family_name));
  }

  attach_qvf_derivatives(t, q);
  e.coeffs = linear_delta_coeffs(q);
  return e;
}

LinearDeltaCoeffs linear_delta_coeffs(const QuadraticVarianceFunction& qvf) {
  return {-qvf.c2 / qvf.k, -qvf.c1 / (2.0 * qvf.k)};
}

double curvature_ratio(const Transform& t, double mu) {
  if (!t.domain.contains_interior(mu)) {
    throw DomainError(fmt::format("{}: mu = {} is not interior to the mean domain ({}, {})", t.name, mu,
                                  t.domain.lo, t.domain.hi));
  }
  const double d1 = t.d1g(mu);
  return t.d2g(mu) / (d1 * d1 * d1);
}

double back_transform_correct(double theta, double sampling_variance, const LinearDeltaCoeffs& coeffs,
                              const Transform& t, BoundaryMode mode) {
  if (theta < t.range.lo || theta > t.range.hi) {
    if (mode == BoundaryMode::kReject) {
      throw DomainError(fmt::format("{}: theta = {} outside range [{}, {}]", t.name, theta, t.range.lo, t.range.hi));
    }
    theta = t.range.clamp(theta);
  }
  return coeffs.multiplier(sampling_variance) * (t.g_inv(theta) - sampling_variance * coeffs.b / 2.0);
}

double forward_shift(double mu, double sampling_variance, const LinearDeltaCoeffs& coeffs, const Transform& t) {
  const double shifted = mu * (1.0 + coeffs.a * sampling_variance / 2.0) + sampling_variance * coeffs.b / 2.0;
  if (shifted < t.domain.lo || shifted > t.domain.hi) {
    throw DomainError(fmt::format("{}: shifted mean {} outside domain ({}, {})", t.name, shifted, t.domain.lo,
                                  t.domain.hi));
  }
  return t.g(shifted);
}

double clamp_direct_estimate(double y, double sum_w2, const Transform& t, BoundaryMode mode, bool& clamped) {
  clamped = false;
  if (mode == BoundaryMode::kReject) {
    if (!t.domain.contains_interior(y)) {
      throw DomainError(fmt::format("{}: direct estimate {} is on or outside the mean-domain boundary", t.name, y));
    }
    return y;
  }
  const double inset = sum_w2 / 4.0;
  double out = y;
  if (t.domain.finite_lo() && out < t.domain.lo + inset) out = t.domain.lo + inset;
  if (t.domain.finite_hi() && out > t.domain.hi - inset) out = t.domain.hi - inset;
  clamped = out != y;
  return out;
}

}  // namespace vstsae
