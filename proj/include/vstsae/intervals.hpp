#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/eb_backtransform.hpp"
#include "vstsae/fh_core.hpp"
#include "vstsae/transforms.hpp"

namespace vstsae {

enum class IntervalMethod { kTDirect, kTEB_YL, kBoot, kTEB_B, kpTEB_B, kMpnaive };

inline constexpr std::size_t kDefaultIntervalBootstrap = 1000;
inline constexpr std::size_t kMinIntervalBootstrap = 200;

std::span<const IntervalMethod> all_interval_methods();
std::string_view interval_name(IntervalMethod method);
IntervalMethod parse_interval(std::string_view name);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  IntervalMethod method = IntervalMethod::kTDirect;
  double alpha = 0.05;
  bool yates_applied = false;
  bool transformed_scale = false;

  double length() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return x >= lower && x <= upper; }
};

/// z_{alpha/2}, the upper alpha/2 standard normal quantile.
double normal_critical_value(double alpha);

/// Maps transformed-scale limits through back_transform_correct endpoint-wise.
/// Limits outside t.range are clamped (or rejected under kReject) first.
Interval transform_interval(const Interval& transformed, double sampling_variance, const LinearDeltaCoeffs& coeffs,
                            const Transform& t, BoundaryMode mode = BoundaryMode::kClamp);

/// Maps transformed-scale limits through g_inv alone (no multiplier, no shift).
Interval plain_inverse_interval(const Interval& transformed, const Transform& t);

/// Per-area bootstrap quantiles of (theta* - theta_eb*) / sqrt(g1(A*, D)).
struct RootQuantiles {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t B = 0;
  std::size_t failures = 0;
};

/// Parametric bootstrap of the standardized EB root; refits use fit.method.
/// Quantiles are order statistics at ranks ceil(B' alpha/2) and
/// ceil(B' (1 - alpha/2)), B' the number of successful refits.
RootQuantiles bootstrap_root_quantiles(const AreaDataset& ds, const ModelFit& fit, double alpha, std::size_t B,
                                       std::uint64_t seed, std::size_t workers = 1);

/// theta_eb + q sqrt(g1(A_hat, D)) mapped to the original scale, with the
/// multiplier and shift (TEB_B) or through g_inv only (pTEB_B).
std::vector<Interval> intervals_from_root_quantiles(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                                    const LinearDeltaCoeffs& coeffs, const RootQuantiles& q,
                                                    double alpha, bool with_multiplier);

/// Plug-in original-scale standard deviation of the direct estimate used by
/// Mpnaive. Bernoulli/arcsin: sqrt(y(1-y) sum_w2), with y in {0, 1} replaced
/// by sum_w2/(4n); other families: sqrt(D) / g'(eb).
double naive_direct_sd(const AreaObservation& obs, double eb, const Transform& t);

struct IntervalOptions {
  double alpha = 0.05;
  std::size_t B = kDefaultIntervalBootstrap;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
};

/// Builds the per-area intervals for one method. TEB_YL needs a YL fit and
/// TEB_B / pTEB_B an LL fit; other methods accept any fit.
std::vector<Interval> build_interval(const AreaDataset& ds, const ModelFit& fit, const Transform& t,
                                     const LinearDeltaCoeffs& coeffs, IntervalMethod method,
                                     const IntervalOptions& opts = {});

/// Widens each side by w_median/2 and clamps to hard mean-scale bounds.
Interval yates_correct(const Interval& iv, double w_median, const Bounds& hard_bounds);

/// Leading term of L_TD - L_TEB:
///   2 z_{a/2} [ (sqrt(D) - sqrt(g1)) (g_inv)'(theta) + sqrt(D) (z - theta) (g_inv)''(theta) ]
/// evaluated at theta = theta_eb, g1 = g1(A_hat, D).
double length_gap_leading_term(double z, double sampling_variance, double theta_eb, double A_hat,
                               const Transform& t, double alpha);

/// Exact lengths of the transformed direct interval and the transformed
/// Cox-form EB interval theta_eb +- z_{a/2} sqrt(g1).
struct LengthPair {
  double td = 0.0;
  double teb = 0.0;
  double gap() const noexcept { return td - teb; }
};

LengthPair transformed_lengths(double z, double sampling_variance, double theta_eb, double A_hat,
                               const Transform& t, const LinearDeltaCoeffs& coeffs, double alpha);

/// The sufficient condition for a positive gap: g_inv increasing at theta_eb
/// and either convex there with z > theta_eb or concave there with z < theta_eb.
bool shorter_teb_predicate(double z, double theta_eb, const Transform& t);

}  // namespace vstsae
