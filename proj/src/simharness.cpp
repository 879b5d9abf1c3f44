#include "vstsae/simharness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include "json.hpp"

#include "vstsae/eb_backtransform.hpp"
#include "vstsae/errors.hpp"
#include "vstsae/fh_core.hpp"
#include "vstsae/mse.hpp"
#include "vstsae/parallel.hpp"
#include "vstsae/rng.hpp"

namespace vstsae {

namespace {

constexpr std::array<PointEstimator, 7> kEstimators = {
    PointEstimator::kNBT_RE, PointEstimator::kNBT_YL, PointEstimator::kpEB_RE, PointEstimator::kpEB_YL,
    PointEstimator::kEB_RE,  PointEstimator::kEB_YL,  PointEstimator::kDirect,
};
constexpr std::array<MseEstimator, 5> kMseEstimators = {
    MseEstimator::kM1_RE, MseEstimator::kM1_YL, MseEstimator::kMs_RE, MseEstimator::kMs_YL, MseEstimator::kpMs_YL,
};
constexpr std::size_t kJackknifeGroups = 20;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool uses_re(PointEstimator e) {
  return e == PointEstimator::kNBT_RE || e == PointEstimator::kpEB_RE || e == PointEstimator::kEB_RE;
}
bool uses_re(MseEstimator e) { return e == MseEstimator::kM1_RE || e == MseEstimator::kMs_RE; }

// The EB estimator whose simulated MSE serves as truth for an MSE estimator.
PointEstimator matching_eb(MseEstimator e) { return uses_re(e) ? PointEstimator::kEB_RE : PointEstimator::kEB_YL; }

std::size_t index_of(PointEstimator e) { return static_cast<std::size_t>(e); }

// Everything one replicate contributes, laid out [item][area].
struct Outcome {
  bool ok = false;
  bool reml_zero = false;
  std::size_t clamped = 0;
  std::vector<double> err;    // kEstimators.size() x m, estimate - p_i
  std::vector<double> mhat;   // menus.mse.size() x m
  std::vector<char> cover;    // menus.intervals.size() x m
  std::vector<double> len;    // menus.intervals.size() x m
  std::vector<double> td_len; // m, TDirect lengths (for the longer-than comparison)
};

struct Needs {
  bool yl = false;
  bool ll = false;
  bool intervals = false;
};

Needs needs_for(const StudyMenus& menus) {
  Needs n;
  for (auto e : menus.estimators) n.yl |= !uses_re(e) && e != PointEstimator::kDirect;
  for (auto e : menus.mse) n.yl |= !uses_re(e);
  for (auto iv : menus.intervals) {
    n.intervals = true;
    n.yl |= iv == IntervalMethod::kTEB_YL || iv == IntervalMethod::kBoot;
    n.ll |= iv == IntervalMethod::kTEB_B || iv == IntervalMethod::kpTEB_B;
  }
  return n;
}

std::uint64_t replicate_stream_seed(const SimConfig& cfg, std::size_t r, StreamTag t) {
  return stream_seed(cfg.master_seed, {cfg.m, cfg.n, r, tag(t)});
}

Outcome run_replicate(const SimConfig& cfg, const StudyMenus& menus, const Needs& needs, std::size_t r) {
  const auto arcsin = catalog("bernoulli-arcsin");
  const Transform& t = arcsin.transform;
  const LinearDeltaCoeffs& coeffs = arcsin.coeffs;
  const std::size_t m = cfg.m;
  const std::size_t nodes = cfg.quadrature_nodes;

  Outcome out;
  const SimReplicate rep = generate_replicate(cfg, r);
  const AreaDataset& ds = rep.ds;
  const ModelData data = ds.model_data();
  out.clamped = ds.clamped_count();

  OptimizerOptions quiet;
  quiet.track_reml_zero = false;
  const ModelFit fit_re = fit_model(data, VarianceMethod::kREML, quiet);
  out.reml_zero = fit_re.reml_was_zero;
  ModelFit fit_yl, fit_ll;
  if (needs.yl) fit_yl = fit_model(data, VarianceMethod::kYL, quiet);
  if (needs.ll) fit_ll = fit_model(data, VarianceMethod::kLL, quiet);

  out.err.assign(kEstimators.size() * m, kNaN);
  const EstimateBundle est_re = point_estimates(ds, fit_re, t, coeffs, nodes);
  EstimateBundle est_yl;
  if (needs.yl) est_yl = point_estimates(ds, fit_yl, t, coeffs, nodes);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = rep.p[i];
    auto put = [&](PointEstimator e, double v) { out.err[index_of(e) * m + i] = v - p; };
    put(PointEstimator::kNBT_RE, est_re.areas[i].nbt);
    put(PointEstimator::kpEB_RE, est_re.areas[i].peb);
    put(PointEstimator::kEB_RE, est_re.areas[i].eb);
    put(PointEstimator::kDirect, est_re.areas[i].direct);
    if (needs.yl) {
      put(PointEstimator::kNBT_YL, est_yl.areas[i].nbt);
      put(PointEstimator::kpEB_YL, est_yl.areas[i].peb);
      put(PointEstimator::kEB_YL, est_yl.areas[i].eb);
    }
  }

  out.mhat.assign(menus.mse.size() * m, kNaN);
  MseEstimate ms_re, ms_yl;
  bool have_ms_re = false, have_ms_yl = false;
  for (std::size_t k = 0; k < menus.mse.size(); ++k) {
    const MseEstimator e = menus.mse[k];
    std::vector<double> values;
    switch (e) {
      case MseEstimator::kM1_RE:
        values = m1_estimate(ds, fit_re, t, coeffs, nodes);
        break;
      case MseEstimator::kM1_YL:
        values = m1_estimate(ds, fit_yl, t, coeffs, nodes);
        break;
      case MseEstimator::kMs_RE:
        if (!have_ms_re) {
          ms_re = ms_estimate(ds, fit_re, t, coeffs,
                              {cfg.B_mse, replicate_stream_seed(cfg, r, StreamTag::kMseBootstrapRE), 1, nodes});
          have_ms_re = true;
        }
        values = ms_re.ms;
        break;
      case MseEstimator::kMs_YL:
      case MseEstimator::kpMs_YL:
        if (!have_ms_yl) {
          ms_yl = ms_estimate(ds, fit_yl, t, coeffs,
                              {cfg.B_mse, replicate_stream_seed(cfg, r, StreamTag::kMseBootstrapYL), 1, nodes});
          have_ms_yl = true;
        }
        values = e == MseEstimator::kMs_YL ? ms_yl.ms : ms_yl.pms;
        break;
    }
    std::copy(values.begin(), values.end(), out.mhat.begin() + static_cast<std::ptrdiff_t>(k * m));
  }

  if (needs.intervals) {
    IntervalOptions io;
    io.alpha = cfg.alpha;
    io.B = cfg.B_interval;
    io.seed = replicate_stream_seed(cfg, r, StreamTag::kIntervalBootstrap);
    io.quadrature_nodes = nodes;
    const auto td = build_interval(ds, fit_re, t, coeffs, IntervalMethod::kTDirect, io);
    out.td_len.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.td_len[i] = td[i].length();

    RootQuantiles q;
    if (needs.ll) q = bootstrap_root_quantiles(ds, fit_ll, cfg.alpha, cfg.B_interval, io.seed, 1);

    out.cover.assign(menus.intervals.size() * m, 0);
    out.len.assign(menus.intervals.size() * m, kNaN);
    for (std::size_t k = 0; k < menus.intervals.size(); ++k) {
      const IntervalMethod method = menus.intervals[k];
      std::vector<Interval> ivs;
      switch (method) {
        case IntervalMethod::kTDirect:
          ivs = td;
          break;
        case IntervalMethod::kTEB_YL:
        case IntervalMethod::kBoot:
          ivs = build_interval(ds, fit_yl, t, coeffs, method, io);
          break;
        case IntervalMethod::kTEB_B:
        case IntervalMethod::kpTEB_B:
          ivs = intervals_from_root_quantiles(ds, fit_ll, t, coeffs, q, cfg.alpha, method == IntervalMethod::kTEB_B);
          break;
        case IntervalMethod::kMpnaive:
          ivs = build_interval(ds, fit_re, t, coeffs, method, io);
          break;
      }
      for (std::size_t i = 0; i < m; ++i) {
        out.cover[k * m + i] = ivs[i].contains(rep.p[i]) ? 1 : 0;
        out.len[k * m + i] = ivs[i].length();
      }
    }
  }
  out.ok = true;
  return out;
}

// Delete-a-group jackknife over contiguous replicate blocks.
Cell jackknife(std::size_t R, const std::function<double(const std::vector<char>&)>& stat) {
  std::vector<char> mask(R, 1);
  Cell c;
  c.value = stat(mask);
  const std::size_t G = std::min(R, kJackknifeGroups);
  if (G < 2) {
    c.mcse = kNaN;
    return c;
  }
  std::vector<double> leave_out(G);
  for (std::size_t g = 0; g < G; ++g) {
    const std::size_t lo = g * R / G, hi = (g + 1) * R / G;
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(lo), mask.begin() + static_cast<std::ptrdiff_t>(hi), 0);
    leave_out[g] = stat(mask);
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(lo), mask.begin() + static_cast<std::ptrdiff_t>(hi), 1);
  }
  const double mean = std::accumulate(leave_out.begin(), leave_out.end(), 0.0) / static_cast<double>(G);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  c.mcse = std::sqrt(static_cast<double>(G - 1) / static_cast<double>(G) * ss);
  return c;
}

// Per-area simulated MSE from replicate error rows [r] -> block of m.
std::vector<double> area_mse(const std::vector<const Outcome*>& reps, std::size_t block, std::size_t m,
                             const std::vector<char>& mask) {
  std::vector<double> out(m, 0.0);
  std::size_t count = 0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!mask[r]) continue;
    ++count;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = reps[r]->err[block * m + i];
      out[i] += e * e;
    }
  }
  for (double& v : out) v /= static_cast<double>(count);
  return out;
}

std::vector<std::vector<double>> masked_rows(const std::vector<const Outcome*>& reps, std::size_t block, std::size_t m,
                                             const std::vector<char>& mask) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!mask[r]) continue;
    const auto begin = reps[r]->mhat.begin() + static_cast<std::ptrdiff_t>(block * m);
    rows.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(m));
  }
  return rows;
}

}  // namespace

std::span<const PointEstimator> all_point_estimators() { return kEstimators; }
std::span<const MseEstimator> all_mse_estimators() { return kMseEstimators; }

std::string_view estimator_name(PointEstimator e) {
  switch (e) {
    case PointEstimator::kNBT_RE:
      return "NBT.RE";
    case PointEstimator::kNBT_YL:
      return "NBT.YL";
    case PointEstimator::kpEB_RE:
      return "pEB.RE";
    case PointEstimator::kpEB_YL:
      return "pEB.YL";
    case PointEstimator::kEB_RE:
      return "EB.RE";
    case PointEstimator::kEB_YL:
      return "EB.YL";
    case PointEstimator::kDirect:
      return "Direct";
  }
  return "?";
}

std::string_view estimator_name(MseEstimator e) {
  switch (e) {
    case MseEstimator::kM1_RE:
      return "M1.RE";
    case MseEstimator::kM1_YL:
      return "M1.YL";
    case MseEstimator::kMs_RE:
      return "Ms.RE";
    case MseEstimator::kMs_YL:
      return "Ms.YL";
    case MseEstimator::kpMs_YL:
      return "pMs.YL";
  }
  return "?";
}

StudyMenus StudyMenus::all() {
  StudyMenus menus;
  menus.estimators.assign(kEstimators.begin(), kEstimators.end());
  menus.mse.assign(kMseEstimators.begin(), kMseEstimators.end());
  const auto ivs = all_interval_methods();
  menus.intervals.assign(ivs.begin(), ivs.end());
  return menus;
}

void SimConfig::validate() const {
  if (m < 3) throw InputError(fmt::format("simulation needs m >= 3, got {}", m));
  if (n < 1) throw InputError("simulation needs n >= 1");
  if (R < 1) throw InputError("simulation needs R >= 1");
  if (!(A_true > 0.0)) throw InputError(fmt::format("A_true must be > 0, got {}", A_true));
  if (weight_pattern.empty()) throw InputError("empty weight pattern");
  for (double w : weight_pattern) {
    if (!(w > 0.0)) throw InputError("weight pattern entries must be > 0");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) throw InputError(fmt::format("alpha must lie in (0, 1/2), got {}", alpha));
}

std::vector<double> area_weights(std::size_t n, std::span<const double> pattern) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = pattern[j % pattern.size()];
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return w;
}

SimReplicate generate_replicate(const SimConfig& cfg, std::size_t replicate_index) {
  const auto arcsin = catalog("bernoulli-arcsin");
  Engine rng = make_stream(cfg.master_seed, {cfg.m, cfg.n, replicate_index, tag(StreamTag::kData)});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const std::vector<double> w = area_weights(cfg.n, cfg.weight_pattern);
  double sum_w2 = 0.0;
  for (double v : w) sum_w2 += v * v;
  const double w_med = median_weight(w);
  const double sd_u = std::sqrt(cfg.A_true);

  SimReplicate rep;
  rep.theta.resize(cfg.m);
  rep.p.resize(cfg.m);
  std::vector<AreaRecord> records(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const double theta = cfg.mu_true + sd_u * normal(rng);
    const double p = 0.5 * (1.0 + std::sin(theta) / (1.0 + sum_w2 / 2.0));
    double y = 0.0;
    for (std::size_t j = 0; j < cfg.n; ++j) {
      if (unif(rng) < p) y += w[j];
    }
    rep.theta[i] = theta;
    rep.p[i] = p;
    AreaRecord& rec = records[i];
    rec.area_id = fmt::format("area{:03d}", i + 1);
    rec.y_direct = std::clamp(y, 0.0, 1.0);
    rec.sum_w2 = sum_w2;
    rec.n = static_cast<int>(cfg.n);
    rec.x = {1.0};
    rec.w_median = w_med;
  }
  rep.ds = build_dataset(records, arcsin.transform, arcsin.qvf.k, BoundaryMode::kClamp, {"intercept"});
  return rep;
}

double percent_relative_bias(std::span<const std::vector<double>> estimates, std::span<const double> truth) {
  if (estimates.empty()) return kNaN;
  const std::size_t m = truth.size();
  double acc = 0.0;
  for (const auto& row : estimates) {
    for (std::size_t i = 0; i < m; ++i) acc += (row[i] - truth[i]) / truth[i];
  }
  return acc / static_cast<double>(m * estimates.size()) * 100.0;
}

double percent_relative_rmse(std::span<const std::vector<double>> estimates, std::span<const double> truth,
                             PrrmseReading reading) {
  if (estimates.empty()) return kNaN;
  const std::size_t m = truth.size();
  const double R = static_cast<double>(estimates.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ss = 0.0;
    for (const auto& row : estimates) ss += (row[i] - truth[i]) * (row[i] - truth[i]);
    acc += reading == PrrmseReading::kLiteral ? std::sqrt(ss) / (R * truth[i]) : std::sqrt(ss / R) / truth[i];
  }
  return acc / static_cast<double>(m) * 100.0;
}

Cell paired_difference(std::span<const double> a, std::span<const double> b) {
  const std::size_t R = a.size();
  std::vector<double> d(R);
  for (std::size_t r = 0; r < R; ++r) d[r] = a[r] - b[r];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(R);
  if (R < 2) return {mean, kNaN};
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R))};
}

ScenarioResult run_scenario(const SimConfig& cfg, const StudyMenus& menus, std::size_t workers) {
  cfg.validate();
  const Needs needs = needs_for(menus);
  const std::size_t m = cfg.m;

  std::vector<Outcome> outcomes(cfg.R);
  parallel_for(cfg.R, workers, [&](std::size_t r) {
    try {
      outcomes[r] = run_replicate(cfg, menus, needs, r);
    } catch (const NumericalError&) {
      outcomes[r].ok = false;
    } catch (const DomainError&) {
      outcomes[r].ok = false;
    } catch (const BootstrapBudgetError&) {
      outcomes[r].ok = false;
    }
  });

  ScenarioResult res;
  res.config = cfg;
  res.weights_cycled = cfg.n % cfg.weight_pattern.size() != 0;
  std::vector<const Outcome*> reps;
  for (const auto& o : outcomes) {
    if (o.ok) {
      reps.push_back(&o);
      res.clamped_direct += o.clamped;
    }
  }
  res.replicates_used = reps.size();
  res.replicate_failures = cfg.R - reps.size();
  if (static_cast<double>(res.replicate_failures) > kMaxReplicateFailureRate * static_cast<double>(cfg.R)) {
    throw NumericalError(fmt::format("scenario (m={}, n={}): {} of {} replicates failed", cfg.m, cfg.n,
                                     res.replicate_failures, cfg.R));
  }
  const std::size_t R = reps.size();
  if (R == 0) throw NumericalError("no successful replicates");

  for (PointEstimator e : menus.estimators) {
    const std::size_t blk = index_of(e);
    res.abs_bias.push_back(jackknife(R, [&](const std::vector<char>& mask) {
      std::vector<double> bias(m, 0.0);
      std::size_t count = 0;
      for (std::size_t r = 0; r < R; ++r) {
        if (!mask[r]) continue;
        ++count;
        for (std::size_t i = 0; i < m; ++i) bias[i] += reps[r]->err[blk * m + i];
      }
      double acc = 0.0;
      for (double b : bias) acc += std::abs(b / static_cast<double>(count));
      return acc / static_cast<double>(m);
    }));
    res.mse.push_back(jackknife(R, [&](const std::vector<char>& mask) {
      const auto per_area = area_mse(reps, blk, m, mask);
      return std::accumulate(per_area.begin(), per_area.end(), 0.0) / static_cast<double>(m);
    }));
    std::vector<double> per_rep(R);
    for (std::size_t r = 0; r < R; ++r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += reps[r]->err[blk * m + i] * reps[r]->err[blk * m + i];
      per_rep[r] = acc / static_cast<double>(m);
    }
    res.replicate_mean_sq_error.push_back(std::move(per_rep));
  }

  for (std::size_t k = 0; k < menus.mse.size(); ++k) {
    const std::size_t truth_blk = index_of(matching_eb(menus.mse[k]));
    res.prb.push_back(jackknife(R, [&](const std::vector<char>& mask) {
      const auto truth = area_mse(reps, truth_blk, m, mask);
      const auto rows = masked_rows(reps, k, m, mask);
      return percent_relative_bias(rows, truth);
    }));
    res.prrmse.push_back(jackknife(R, [&](const std::vector<char>& mask) {
      const auto truth = area_mse(reps, truth_blk, m, mask);
      const auto rows = masked_rows(reps, k, m, mask);
      return percent_relative_rmse(rows, truth, cfg.prrmse_reading);
    }));
  }

  res.replicate_reml_zero.resize(R);
  for (std::size_t r = 0; r < R; ++r) res.replicate_reml_zero[r] = reps[r]->reml_zero ? 1 : 0;
  res.zero_reml_pct = jackknife(R, [&](const std::vector<char>& mask) {
    double hits = 0.0, count = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      if (!mask[r]) continue;
      count += 1.0;
      hits += reps[r]->reml_zero ? 1.0 : 0.0;
    }
    return 100.0 * hits / count;
  });

  auto area_average = [&](auto&& value) {
    return [&, value](const std::vector<char>& mask) {
      double acc = 0.0, count = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        if (!mask[r]) continue;
        for (std::size_t i = 0; i < m; ++i) {
          acc += value(*reps[r], i);
          count += 1.0;
        }
      }
      return acc / count;
    };
  };
  for (std::size_t k = 0; k < menus.intervals.size(); ++k) {
    res.coverage_pct.push_back(
        jackknife(R, area_average([k, m](const Outcome& o, std::size_t i) { return 100.0 * o.cover[k * m + i]; })));
    res.mean_length.push_back(
        jackknife(R, area_average([k, m](const Outcome& o, std::size_t i) { return o.len[k * m + i]; })));
    res.longer_than_tdirect_pct.push_back(jackknife(R, area_average([k, m](const Outcome& o, std::size_t i) {
      return o.len[k * m + i] > o.td_len[i] ? 100.0 : 0.0;
    })));
  }
  return res;
}

SimReport run_study(std::span<const SimConfig> scenarios, const StudyMenus& menus, std::size_t workers) {
  SimReport report;
  report.menus = menus;
  for (const auto& cfg : scenarios) report.scenarios.push_back(run_scenario(cfg, menus, workers));
  return report;
}

namespace {

struct TableSpec {
  std::string file;
  std::string title;
  double scale;
  std::vector<std::string> columns;
  std::function<std::vector<Cell>(const ScenarioResult&)> cells;
};

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  return fmt::format("{:.10g}", v);
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::vector<TableSpec> table_specs(const StudyMenus& menus) {
  std::vector<std::string> est_cols, mse_cols, iv_cols, longer_cols;
  for (auto e : menus.estimators) est_cols.emplace_back(estimator_name(e));
  for (auto e : menus.mse) mse_cols.emplace_back(estimator_name(e));
  std::vector<std::size_t> longer_idx;
  for (std::size_t k = 0; k < menus.intervals.size(); ++k) {
    iv_cols.emplace_back(interval_name(menus.intervals[k]));
    if (menus.intervals[k] != IntervalMethod::kTDirect) {
      longer_cols.emplace_back(interval_name(menus.intervals[k]));
      longer_idx.push_back(k);
    }
  }
  std::vector<TableSpec> specs;
  specs.push_back({"table1_abs_bias", "Average absolute bias across areas (x 1e2)", 1e2, est_cols,
                   [](const ScenarioResult& s) { return s.abs_bias; }});
  specs.push_back({"table2_mse", "MSE across areas (x 1e4)", 1e4, est_cols,
                   [](const ScenarioResult& s) { return s.mse; }});
  specs.push_back({"table3_prb", "Percent relative bias of MSE estimators", 1.0, mse_cols,
                   [](const ScenarioResult& s) { return s.prb; }});
  specs.push_back({"table4_prrmse", "Percent relative RMSE of MSE estimators", 1.0, mse_cols,
                   [](const ScenarioResult& s) { return s.prrmse; }});
  specs.push_back({"table5_zero_reml", "Percentage of REML estimates equal to zero", 1.0, {"zero_reml_pct"},
                   [](const ScenarioResult& s) { return std::vector<Cell>{s.zero_reml_pct}; }});
  specs.push_back({"table6_coverage", "Coverage probability of intervals (percent)", 1.0, iv_cols,
                   [](const ScenarioResult& s) { return s.coverage_pct; }});
  specs.push_back({"table7_length", "Average interval length", 1.0, iv_cols,
                   [](const ScenarioResult& s) { return s.mean_length; }});
  specs.push_back({"table8_longer_than_tdirect", "Percentage of intervals longer than TDirect", 1.0, longer_cols,
                   [longer_idx](const ScenarioResult& s) {
                     std::vector<Cell> out;
                     for (std::size_t k : longer_idx) out.push_back(s.longer_than_tdirect_pct[k]);
                     return out;
                   }});
  return specs;
}

void write_or_throw(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

}  // namespace

std::vector<std::filesystem::path> emit_tables(const SimReport& report, const std::filesystem::path& dir,
                                               TableFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const TableSpec& spec : table_specs(report.menus)) {
    if (format != TableFormat::kJson) {
      std::string csv = "m,n";
      for (const auto& c : spec.columns) csv += fmt::format(",{},{}_mcse", c, c);
      csv += '\n';
      for (const auto& s : report.scenarios) {
        csv += fmt::format("{},{}", s.config.m, s.config.n);
        for (const Cell& c : spec.cells(s)) {
          csv += fmt::format(",{},{}", format_number(c.value * spec.scale), format_number(c.mcse * spec.scale));
        }
        csv += '\n';
      }
      const auto path = dir / (spec.file + ".csv");
      write_or_throw(path, csv);
      written.push_back(path);
    }
    if (format != TableFormat::kCsv) {
      nlohmann::json j;
      j["table"] = spec.file;
      j["title"] = spec.title;
      j["scale"] = spec.scale;
      j["columns"] = spec.columns;
      j["rows"] = nlohmann::json::array();
      for (const auto& s : report.scenarios) {
        nlohmann::json row;
        row["m"] = s.config.m;
        row["n"] = s.config.n;
        row["replicates"] = s.replicates_used;
        nlohmann::json values = nlohmann::json::object();
        const auto cells = spec.cells(s);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          values[spec.columns[c]] = {{"value", json_number(cells[c].value * spec.scale)},
                                     {"mcse", json_number(cells[c].mcse * spec.scale)}};
        }
        row["values"] = values;
        j["rows"].push_back(row);
      }
      const auto path = dir / (spec.file + ".json");
      write_or_throw(path, j.dump(2) + "\n");
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace vstsae
