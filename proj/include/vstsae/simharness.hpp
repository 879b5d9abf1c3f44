#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/intervals.hpp"

namespace vstsae {

enum class PointEstimator { kNBT_RE, kNBT_YL, kpEB_RE, kpEB_YL, kEB_RE, kEB_YL, kDirect };
enum class MseEstimator { kM1_RE, kM1_YL, kMs_RE, kMs_YL, kpMs_YL };

/// How PRRMSE places 1/R. kLiteral: (1/(R M_i)) [sum_r (.)^2]^{1/2};
/// kConventional: (1/M_i) [(1/R) sum_r (.)^2]^{1/2}.
enum class PrrmseReading { kLiteral, kConventional };

std::span<const PointEstimator> all_point_estimators();
std::span<const MseEstimator> all_mse_estimators();
std::string_view estimator_name(PointEstimator e);
std::string_view estimator_name(MseEstimator e);

/// One simulation scenario of the arcsin / Bernoulli design.
struct SimConfig {
  std::size_t m = 15;
  std::size_t n = 10;
  double A_true = 0.006;
  double mu_true = 0.0;
  std::vector<double> weight_pattern{1.0, 1.0, 2.0, 3.0, 3.0};
  std::size_t R = 500;
  std::size_t B_mse = 100;
  std::size_t B_interval = 1000;
  std::uint64_t master_seed = 20250601;
  double alpha = 0.05;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
  PrrmseReading prrmse_reading = PrrmseReading::kConventional;

  void validate() const;
};

/// Normalized unit weights for one area: the pattern repeated out to n
/// entries (cycling when n is not a multiple of the pattern length), then
/// scaled to sum to one.
std::vector<double> area_weights(std::size_t n, std::span<const double> pattern);

struct SimReplicate {
  AreaDataset ds;
  std::vector<double> theta;  // true area effects, transformed scale
  std::vector<double> p;      // true means, original scale
};

/// theta_i = mu + u_i, u_i ~ N(0, A); p_i = (1 + sin(theta_i)/(1 + D_i/2))/2;
/// y_ij ~ Bernoulli(p_i); y_i = sum_j w_ij y_ij; D_i = sum_j w_ij^2.
/// Draws come from the stream (master_seed, m, n, r, data).
SimReplicate generate_replicate(const SimConfig& cfg, std::size_t replicate_index);

struct StudyMenus {
  std::vector<PointEstimator> estimators;
  std::vector<MseEstimator> mse;
  std::vector<IntervalMethod> intervals;

  static StudyMenus all();
};

/// A Monte Carlo cell: estimate and its standard error.
struct Cell {
  double value = 0.0;
  double mcse = 0.0;
};

struct ScenarioResult {
  SimConfig config;
  std::size_t replicates_used = 0;
  std::size_t replicate_failures = 0;
  std::size_t clamped_direct = 0;  // transformed direct estimates moved off the boundary
  bool weights_cycled = false;     // n not a multiple of the pattern length

  std::vector<Cell> abs_bias;  // per menus.estimators, original-scale units
  std::vector<Cell> mse;       // per menus.estimators
  std::vector<Cell> prb;       // per menus.mse, percent
  std::vector<Cell> prrmse;    // per menus.mse, percent
  Cell zero_reml_pct;
  std::vector<Cell> coverage_pct;     // per menus.intervals
  std::vector<Cell> mean_length;      // per menus.intervals
  std::vector<Cell> longer_than_tdirect_pct;  // per menus.intervals (TDirect itself: 0)

  // Per-replicate summaries kept for paired comparisons.
  std::vector<std::vector<double>> replicate_mean_sq_error;  // [estimator][r]
  std::vector<char> replicate_reml_zero;                     // [r]
};

struct SimReport {
  StudyMenus menus;
  std::vector<ScenarioResult> scenarios;
};

/// Fraction of failed replicates above which a scenario aborts.
inline constexpr double kMaxReplicateFailureRate = 0.01;

ScenarioResult run_scenario(const SimConfig& cfg, const StudyMenus& menus, std::size_t workers = 1);
SimReport run_study(std::span<const SimConfig> scenarios, const StudyMenus& menus, std::size_t workers = 1);

/// (1/(mR)) sum_i sum_r (Mhat_ir - M_i)/M_i * 100. `estimates` is R rows of m.
double percent_relative_bias(std::span<const std::vector<double>> estimates, std::span<const double> truth);
double percent_relative_rmse(std::span<const std::vector<double>> estimates, std::span<const double> truth,
                             PrrmseReading reading);

/// Mean and standard error of a paired difference of per-replicate values.
Cell paired_difference(std::span<const double> a, std::span<const double> b);

enum class TableFormat { kCsv, kJson, kBoth };

/// Writes the eight table analogs (bias, MSE, PRB, PRRMSE, zero-REML,
/// coverage, length, longer-than-TDirect) into `dir`; returns written paths.
std::vector<std::filesystem::path> emit_tables(const SimReport& report, const std::filesystem::path& dir,
                                               TableFormat format = TableFormat::kBoth);

}  // namespace vstsae
