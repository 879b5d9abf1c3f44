#include "vstsae/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "vstsae/errors.hpp"

namespace vstsae {

AreaDataset::AreaDataset(std::vector<AreaObservation> observations, std::vector<std::string> column_names,
                         double leverage_rho)
    : observations_(std::move(observations)), column_names_(std::move(column_names)) {
  const std::size_t m = observations_.size();
  if (m == 0) throw InputError("dataset has no areas");
  p_ = observations_.front().x.size();
  if (p_ == 0) throw InputError("dataset has no covariate columns");
  if (column_names_.empty()) {
    for (std::size_t j = 0; j < p_; ++j) column_names_.push_back(fmt::format("x{}", j));
  }
  if (column_names_.size() != p_) {
    throw InputError(fmt::format("{} column names for {} covariates", column_names_.size(), p_));
  }

  std::set<std::string> seen;
  z_.resize(m);
  d_.resize(m);
  x_.resize(m * p_);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& o = observations_[i];
    if (!seen.insert(o.area_id).second) throw InputError(fmt::format("duplicate area_id '{}'", o.area_id));
    if (o.x.size() != p_) {
      throw InputError(fmt::format("area '{}' has {} covariates, expected {}", o.area_id, o.x.size(), p_));
    }
    if (!(o.D > 0.0) || !std::isfinite(o.D)) {
      throw InputError(fmt::format("area '{}': sampling variance D must be > 0, got {}", o.area_id, o.D));
    }
    if (!(o.sum_w2 > 0.0 && o.sum_w2 <= 1.0 + 1e-12)) {
      throw InputError(fmt::format("area '{}': sum_w2 must lie in (0, 1], got {}", o.area_id, o.sum_w2));
    }
    if (o.n < 1) throw InputError(fmt::format("area '{}': n must be >= 1, got {}", o.area_id, o.n));
    if (!std::isfinite(o.z)) throw InputError(fmt::format("area '{}': transformed estimate is not finite", o.area_id));
    z_[i] = o.z;
    d_[i] = o.D;
    for (std::size_t j = 0; j < p_; ++j) {
      if (!std::isfinite(o.x[j])) {
        throw InputError(fmt::format("area '{}': covariate {} is not finite", o.area_id, column_names_[j]));
      }
      x_[j * m + i] = o.x[j];
    }
  }

  const Eigen::Map<const Eigen::MatrixXd> X(x_.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p_));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  diagnostics_.rank = static_cast<std::size_t>(qr.rank());
  if (diagnostics_.rank < p_) {
    std::vector<std::string> offending;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) offending.push_back(column_names_[perm[k]]);
    throw InputError(fmt::format("design matrix has rank {} < p = {}; dependent columns: {}", diagnostics_.rank, p_,
                                 fmt::join(offending, ", ")));
  }
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  for (std::size_t i = 0; i < m; ++i) {
    const auto xi = X.row(static_cast<Eigen::Index>(i));
    diagnostics_.max_leverage = std::max(diagnostics_.max_leverage, (xi * xtx_inv * xi.transpose())(0, 0));
  }
  diagnostics_.leverage_bound = leverage_rho * static_cast<double>(p_) / static_cast<double>(m);
  if (diagnostics_.max_leverage > diagnostics_.leverage_bound) {
    diagnostics_.warnings.push_back(fmt::format("max leverage {:.4g} exceeds {:.4g} (rho * p / m)",
                                                diagnostics_.max_leverage, diagnostics_.leverage_bound));
  }
  if (m <= p_) diagnostics_.warnings.push_back(fmt::format("m = {} does not exceed p = {}", m, p_));
}

std::size_t AreaDataset::clamped_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(observations_.begin(), observations_.end(), [](const auto& o) { return o.z_clamped; }));
}

AreaDataset build_dataset(std::span<const AreaRecord> records, const Transform& t, double k, BoundaryMode mode,
                          std::vector<std::string> column_names) {
  std::vector<AreaObservation> obs;
  obs.reserve(records.size());
  for (const auto& r : records) {
    AreaObservation o;
    o.area_id = r.area_id;
    o.y_direct = r.y_direct;
    o.sum_w2 = r.sum_w2;
    o.n = r.n;
    o.x = r.x;
    o.w_median = r.w_median;
    o.D = r.D ? *r.D : k * r.sum_w2;
    bool clamped = false;
    const double y = clamp_direct_estimate(r.y_direct, r.sum_w2, t, mode, clamped);
    o.z = t.g(y);
    o.z_clamped = clamped;
    obs.push_back(std::move(o));
  }
  return AreaDataset(std::move(obs), std::move(column_names));
}

double median_weight(std::vector<double> weights) {
  if (weights.empty()) return 0.0;
  std::sort(weights.begin(), weights.end());
  const std::size_t n = weights.size();
  return n % 2 == 1 ? weights[n / 2] : 0.5 * (weights[n / 2 - 1] + weights[n / 2]);
}

}  // namespace vstsae
