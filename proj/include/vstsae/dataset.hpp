#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vstsae/transforms.hpp"

namespace vstsae {

/// One area-level record on both scales.
struct AreaObservation {
  std::string area_id;
  double y_direct = 0.0;  // survey-weighted direct estimate, original scale
  double z = 0.0;         // g(y_direct), after boundary handling
  double D = 0.0;         // sampling variance on the transformed scale
  std::vector<double> x;  // covariates, intercept included when requested
  double sum_w2 = 1.0;    // sum_j w_ij^2 with sum_j w_ij = 1
  int n = 1;
  double w_median = 0.0;
  bool z_clamped = false;
};

/// Raw input for one area before transformation.
struct AreaRecord {
  std::string area_id;
  double y_direct = 0.0;
  double sum_w2 = 1.0;
  int n = 1;
  std::vector<double> x;
  std::optional<double> D;  // override; otherwise k * sum_w2
  double w_median = 0.0;
};

/// Read-only view of what the Fay-Herriot fit needs. The design matrix is
/// column-major m x p.
struct ModelData {
  std::span<const double> z;
  std::span<const double> D;
  std::span<const double> x_colmajor;
  std::size_t m = 0;
  std::size_t p = 0;

  double x(std::size_t i, std::size_t j) const { return x_colmajor[j * m + i]; }
};

struct DesignDiagnostics {
  std::size_t rank = 0;
  double max_leverage = 0.0;    // max_i x_i'(X'X)^{-1} x_i
  double leverage_bound = 0.0;  // rho * p / m
  std::vector<std::string> warnings;
};

/// m area observations sharing a p-column design. Immutable after
/// construction; the constructor enforces D > 0, sum_w2 in (0, 1], n >= 1,
/// consistent covariate lengths and rank(X) = p.
class AreaDataset {
 public:
  AreaDataset() = default;
  explicit AreaDataset(std::vector<AreaObservation> observations, std::vector<std::string> column_names = {},
                       double leverage_rho = 4.0);

  std::size_t m() const noexcept { return observations_.size(); }
  std::size_t p() const noexcept { return p_; }
  const std::vector<AreaObservation>& observations() const noexcept { return observations_; }
  const AreaObservation& operator[](std::size_t i) const { return observations_[i]; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const DesignDiagnostics& diagnostics() const noexcept { return diagnostics_; }

  std::span<const double> z() const noexcept { return z_; }
  std::span<const double> D() const noexcept { return d_; }
  std::span<const double> x_colmajor() const noexcept { return x_; }

  ModelData model_data() const noexcept { return {z_, d_, x_, m(), p_}; }
  /// Same design and variances with a different transformed response.
  ModelData model_data(std::span<const double> z) const noexcept { return {z, d_, x_, m(), p_}; }

  std::size_t clamped_count() const noexcept;

 private:
  std::vector<AreaObservation> observations_;
  std::vector<std::string> column_names_;
  std::size_t p_ = 0;
  std::vector<double> z_;
  std::vector<double> d_;
  std::vector<double> x_;
  DesignDiagnostics diagnostics_;
};

/// Applies the transform (with boundary handling) to raw records.
/// D defaults to k * sum_w2 when a record carries no override.
AreaDataset build_dataset(std::span<const AreaRecord> records, const Transform& t, double k,
                          BoundaryMode mode = BoundaryMode::kClamp, std::vector<std::string> column_names = {});

/// Median of unit weights (mean of the two middle values for even counts).
double median_weight(std::vector<double> weights);

}  // namespace vstsae
