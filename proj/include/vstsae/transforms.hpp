#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vstsae {

/// Interval of reals. Either end may be infinite.
struct Bounds {
  double lo;
  double hi;

  bool contains_interior(double x) const noexcept { return x > lo && x < hi; }
  bool finite_lo() const noexcept;
  bool finite_hi() const noexcept;
  double clamp(double x) const noexcept;
};

/// sigma^2(mu) = c0 + c1*mu + c2*mu^2 together with the stabilized constant k
/// in [g'(mu)]^2 sigma^2(mu) = k.
struct QuadraticVarianceFunction {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double k = 1.0;
  Bounds mean_domain{0.0, 0.0};

  double variance(double mu) const noexcept { return c0 + (c1 + c2 * mu) * mu; }

  /// Throws InputError if the coefficients are all zero, k <= 0, or the
  /// variance is not positive on a grid over mean_domain.
  void validate() const;
};

/// Coefficients of the linear shift delta = (D/2)(a*mu + b).
struct LinearDeltaCoeffs {
  double a = 0.0;
  double b = 0.0;

  /// 1 / (1 + a*D/2), the back-transform multiplier.
  double multiplier(double sampling_variance) const;
};

enum class Family {
  kBernoulliArcsin,
  kPoissonSqrt,
  kNegBinomial,
  kNormalIdentity,
  kGammaLog,
  kGhsArcsinh,
  kLognormal,
  kCustom,
};

enum class BoundaryMode { kClamp, kReject };

/// A variance-stabilizing map with its inverse and first three derivatives.
///
/// `g_inv` must be defined on all of `range`; the catalog entries extend it
/// to the whole real line where a natural extension exists (e.g. (1+sin)/2).
/// `posterior_mean` / `posterior_variance`, when set, give the closed-form
/// moments of g_inv(theta) for theta ~ Normal(center, variance).
struct Transform {
  std::string name;
  Family family = Family::kCustom;
  std::function<double(double)> g;
  std::function<double(double)> g_inv;
  std::function<double(double)> d1g;
  std::function<double(double)> d2g;
  std::function<double(double)> d3g;
  Bounds domain{0.0, 0.0};
  Bounds range{0.0, 0.0};
  std::function<double(double, double)> posterior_mean;
  std::function<double(double, double)> posterior_variance;
  /// Posterior-moment quadrature may evaluate g_inv beyond `range` without
  /// clamping (set when the closed forms use the same extension).
  bool inverse_extends_range = false;

  /// First and second derivatives of g_inv at a transformed value.
  double d1g_inv(double theta) const;
  double d2g_inv(double theta) const;
};

struct CatalogEntry {
  Transform transform;
  QuadraticVarianceFunction qvf;
  LinearDeltaCoeffs coeffs;
};

/// Identifiers accepted by catalog(), in listing order.
std::span<const std::string_view> catalog_families();

/// Number of shape parameters a family takes (0 or 1).
std::size_t catalog_shape_arity(std::string_view family_name);

/// Builds a catalog transform under the k = 1 convention.
///
/// Shape parameters: negbinomial and gamma-log take r > 0, lognormal takes
/// phi > 0; the others take none. Throws InputError for unknown families or
/// invalid shape parameters.
CatalogEntry catalog(std::string_view family_name, std::span<const double> shape_params = {});

/// a = -c2/k, b = -c1/(2k).
LinearDeltaCoeffs linear_delta_coeffs(const QuadraticVarianceFunction& qvf);

/// g''(mu) / [g'(mu)]^3. Throws DomainError unless mu is interior to the domain.
double curvature_ratio(const Transform& t, double mu);

/// (1/(1 + a*D/2)) * (g_inv(theta) - D*b/2).
///
/// theta outside `t.range` is clamped to the nearest endpoint, or rejected
/// with DomainError under BoundaryMode::kReject.
double back_transform_correct(double theta, double sampling_variance, const LinearDeltaCoeffs& coeffs,
                              const Transform& t, BoundaryMode mode = BoundaryMode::kClamp);

/// g(mu*(1 + a*D/2) + D*b/2); the inverse of back_transform_correct.
double forward_shift(double mu, double sampling_variance, const LinearDeltaCoeffs& coeffs, const Transform& t);

/// Moves an original-scale direct estimate off the hard edges of the mean
/// domain: values within sum_w2/4 (= 1/(4 n_eff)) of a finite endpoint are
/// pulled to that distance. Returns the (possibly moved) value and sets
/// `clamped`. Under kReject a value at or beyond an endpoint throws DomainError.
double clamp_direct_estimate(double y, double sum_w2, const Transform& t, BoundaryMode mode, bool& clamped);

}  // namespace vstsae
