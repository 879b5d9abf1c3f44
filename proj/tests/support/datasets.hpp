#pragma once

#include <random>
#include <string>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/transforms.hpp"

namespace testsupport {

// Arcsin-scale synthetic areas with an intercept and one covariate.
inline vstsae::AreaDataset arcsin_dataset(std::size_t m, std::uint64_t seed, double A = 0.01) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> nd(10, 60);
  std::vector<vstsae::AreaRecord> recs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int n = nd(rng);
    const double x1 = n01(rng);
    const double theta = -0.3 + 0.1 * x1 + std::sqrt(A) * n01(rng);
    const double sum_w2 = 1.2 / n;
    const double z = theta + std::sqrt(sum_w2) * n01(rng);
    recs[i].area_id = "a" + std::to_string(i);
    recs[i].y_direct = 0.5 * (1.0 + std::sin(std::clamp(z, -1.5, 1.5)));
    recs[i].sum_w2 = sum_w2;
    recs[i].n = n;
    recs[i].x = {1.0, x1};
    recs[i].w_median = 1.0 / n;
  }
  const auto e = vstsae::catalog("bernoulli-arcsin");
  return vstsae::build_dataset(recs, e.transform, e.qvf.k, vstsae::BoundaryMode::kClamp, {"intercept", "x1"});
}

// Identity-scale areas: y_direct is the transformed estimate itself.
inline vstsae::AreaDataset identity_dataset(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> ud(0.2, 1.0);
  std::vector<vstsae::AreaRecord> recs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x1 = n01(rng);
    const double D = ud(rng);
    recs[i].area_id = "id" + std::to_string(i);
    recs[i].y_direct = 1.0 + 0.5 * x1 + 0.7 * n01(rng) + std::sqrt(D) * n01(rng);
    recs[i].sum_w2 = 0.1;
    recs[i].n = 10;
    recs[i].x = {1.0, x1};
    recs[i].D = D;
    recs[i].w_median = 0.1;
  }
  const auto e = vstsae::catalog("normal-identity");
  return vstsae::build_dataset(recs, e.transform, e.qvf.k, vstsae::BoundaryMode::kClamp, {"intercept", "x1"});
}

}  // namespace testsupport
