// Acceptance checks. Run without arguments for all ten criteria, or pass
// criterion numbers to run a subset. Prints one PASS/FAIL line per
// criterion; exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "datasets.hpp"
#include "vstsae/eb_backtransform.hpp"
#include "vstsae/intervals.hpp"
#include "vstsae/mse.hpp"
#include "vstsae/simharness.hpp"
#include "vstsae/transforms.hpp"

using namespace vstsae;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::size_t col(const std::vector<PointEstimator>& v, PointEstimator e) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), e) - v.begin());
}
std::size_t col(const std::vector<IntervalMethod>& v, IntervalMethod e) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), e) - v.begin());
}

std::vector<double> grid_for(const Bounds& b) {
  std::vector<double> g;
  for (int i = 1; i < 400; ++i) {
    const double u = i / 400.0;
    if (b.finite_lo() && b.finite_hi()) {
      g.push_back(b.lo + (b.hi - b.lo) * u);
    } else if (b.finite_lo()) {
      g.push_back(b.lo + 0.01 + 50.0 * u * u);
    } else {
      g.push_back(-20.0 + 40.0 * u);
    }
  }
  return g;
}

Verdict criterion1() {
  double worst_ratio = 0.0, worst_stab = 0.0;
  for (std::string_view name : catalog_families()) {
    for (double shape : {0.5, 1.0, 3.0}) {
      const std::vector<double> sp(catalog_shape_arity(name), shape);
      const auto e = catalog(name, sp);
      for (double mu : grid_for(e.qvf.mean_domain)) {
        worst_ratio = std::max(worst_ratio, std::abs(curvature_ratio(e.transform, mu) - (e.coeffs.a * mu + e.coeffs.b)));
        const double d1 = e.transform.d1g(mu);
        worst_stab = std::max(worst_stab, std::abs(d1 * d1 * e.qvf.variance(mu) - e.qvf.k));
      }
    }
  }
  return {worst_ratio <= 1e-8 && worst_stab <= 1e-10,
          fmt::format("7 families; max |g''/g'^3 - (a mu + b)| = {:.2e} (<= 1e-8), max |g'^2 sigma^2 - k| = {:.2e} "
                      "(<= 1e-10)",
                      worst_ratio, worst_stab)};
}

Verdict criterion2() {
  const auto ds = testsupport::identity_dataset(30, 2024);
  const auto e = catalog("normal-identity");
  double worst = 0.0;
  for (VarianceMethod method : {VarianceMethod::kREML, VarianceMethod::kYL}) {
    const auto fit = fit_model(ds.model_data(), method);
    const auto est = point_estimates(ds, fit, e.transform, e.coeffs);
    const auto m1 = m1_estimate(ds, fit, e.transform, e.coeffs);
    const auto td = build_interval(ds, fit, e.transform, e.coeffs, IntervalMethod::kTDirect);
    const auto naive = build_interval(ds, fit, e.transform, e.coeffs, IntervalMethod::kMpnaive);
    for (std::size_t i = 0; i < ds.m(); ++i) {
      const double th = fit.theta_eb[i];
      for (double v : {est.areas[i].eb - th, est.areas[i].peb - th, est.areas[i].nbt - th,
                       m1[i] - g1(fit.A_hat, ds[i].D), td[i].lower - naive[i].lower, td[i].upper - naive[i].upper}) {
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return {worst <= 1e-12, fmt::format("identity transform, REML and YL fits; max deviation {:.2e} (<= 1e-12)", worst)};
}

Verdict criterion3() {
  const auto e = catalog("bernoulli-arcsin");
  double wm = 0.0, wv = 0.0;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      const PosteriorSpec spec{-1.2 + 2.4 * a / 9.0, 0.001 * std::pow(500.0, b / 9.0), 64};
      wm = std::max(wm, std::abs(posterior_mean_inverse(spec, e.transform) -
                                 posterior_mean_inverse(spec, e.transform, MomentRoute::kQuadrature)));
      wv = std::max(wv, std::abs(posterior_variance_inverse(spec, e.transform) -
                                 posterior_variance_inverse(spec, e.transform, MomentRoute::kQuadrature)));
    }
  }
  return {wm <= 1e-10 && wv <= 1e-10,
          fmt::format("10x10 (center, variance) grid; mean gap {:.2e}, variance gap {:.2e} (<= 1e-10)", wm, wv)};
}

// The (15, 10) R = 500 point-estimator run shared by criteria 4 and 5.
const ScenarioResult& base_run() {
  static const ScenarioResult res = [] {
    SimConfig cfg;
    cfg.m = 15;
    cfg.n = 10;
    cfg.R = 500;
    StudyMenus menus;
    menus.estimators = StudyMenus::all().estimators;
    return run_scenario(cfg, menus, std::max(1u, std::thread::hardware_concurrency()));
  }();
  return res;
}

Verdict criterion4() {
  const auto& r = base_run();
  const auto est = StudyMenus::all().estimators;
  const double eb = r.mse[col(est, PointEstimator::kEB_RE)].value * 1e4;
  const double direct = r.mse[col(est, PointEstimator::kDirect)].value * 1e4;
  bool ok = eb >= 47.0 && eb <= 65.0 && direct >= 275.0 && direct <= 340.0;
  std::string chain;
  for (const auto& [lo, hi] : std::vector<std::pair<PointEstimator, PointEstimator>>{
           {PointEstimator::kEB_RE, PointEstimator::kpEB_RE},
           {PointEstimator::kpEB_RE, PointEstimator::kNBT_RE},
           {PointEstimator::kNBT_RE, PointEstimator::kDirect},
           {PointEstimator::kEB_YL, PointEstimator::kpEB_YL},
           {PointEstimator::kpEB_YL, PointEstimator::kNBT_YL},
           {PointEstimator::kNBT_YL, PointEstimator::kDirect}}) {
    const Cell d = paired_difference(r.replicate_mean_sq_error[col(est, hi)], r.replicate_mean_sq_error[col(est, lo)]);
    const bool sig = d.value - 3.0 * d.mcse > 0.0;
    ok &= sig;
    chain += fmt::format(" {}<{}:{:.1f}sd", estimator_name(lo), estimator_name(hi), d.value / d.mcse);
  }
  return {ok, fmt::format("(15,10) R=500: MSE x1e4 EB.RE {:.2f} +- {:.2f} in [47,65], Direct {:.2f} +- {:.2f} in "
                          "[275,340]; paired gaps (need > 3 sd):{}",
                          eb, r.mse[col(est, PointEstimator::kEB_RE)].mcse * 1e4, direct,
                          r.mse[col(est, PointEstimator::kDirect)].mcse * 1e4, chain)};
}

Verdict criterion5() {
  const auto& r = base_run();
  const auto est = StudyMenus::all().estimators;
  const double eb = r.abs_bias[col(est, PointEstimator::kEB_RE)].value * 1e2;
  const double direct = r.abs_bias[col(est, PointEstimator::kDirect)].value * 1e2;
  // Expected |mean error| x1e2 of an unbiased estimator from Monte Carlo noise alone.
  const auto floor = [&](PointEstimator e) {
    return std::sqrt(2.0 / M_PI * r.mse[col(est, e)].value / static_cast<double>(r.replicates_used)) * 1e2;
  };
  return {eb <= 0.10 && direct >= 0.14 && direct <= 0.20,
          fmt::format("(15,10) R=500: mean |bias| x1e2 EB.RE {:.3f} (<= 0.10), Direct {:.3f} (in [0.14,0.20]); "
                      "noise floor for an unbiased estimator at this R: EB.RE {:.3f}, Direct {:.3f}",
                      eb, direct, floor(PointEstimator::kEB_RE), floor(PointEstimator::kDirect))};
}

Verdict criterion6() {
  const auto& base = base_run();
  const double pct = base.zero_reml_pct.value;
  bool ok = std::abs(pct - 36.82) <= 5.0;
  StudyMenus menus;
  menus.estimators = {PointEstimator::kEB_RE};
  std::map<std::pair<std::size_t, std::size_t>, Cell> z;
  for (std::size_t m : {15u, 50u}) {
    for (std::size_t n : {10u, 100u}) {
      SimConfig cfg;
      cfg.m = m;
      cfg.n = n;
      cfg.R = 200;
      z[{m, n}] = run_scenario(cfg, menus, std::max(1u, std::thread::hardware_concurrency())).zero_reml_pct;
    }
  }
  const auto gt = [&](std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b) {
    return z[a].value > z[b].value;
  };
  const bool mono = gt({15, 10}, {50, 10}) && gt({15, 10}, {15, 100}) && gt({50, 10}, {50, 100}) &&
                    gt({15, 100}, {50, 100});
  ok &= mono;
  return {ok, fmt::format("zero-REML at (15,10) R=500: {:.1f}% +- {:.1f} (36.82 +- 5); R=200 grid (15,10) {:.1f}, "
                          "(15,100) {:.1f}, (50,10) {:.1f}, (50,100) {:.1f} (decreasing in m and n: {})",
                          pct, base.zero_reml_pct.mcse, z[{15, 10}].value, z[{15, 100}].value, z[{50, 10}].value,
                          z[{50, 100}].value, mono ? "yes" : "no")};
}

Verdict criterion7() {
  SimConfig cfg;
  cfg.m = 15;
  cfg.n = 100;
  cfg.R = 500;
  cfg.B_interval = 500;
  StudyMenus menus;
  menus.estimators = {PointEstimator::kEB_RE};
  menus.intervals = {IntervalMethod::kTDirect, IntervalMethod::kTEB_B, IntervalMethod::kMpnaive};
  const auto r = run_scenario(cfg, menus, std::max(1u, std::thread::hardware_concurrency()));
  const auto& iv = menus.intervals;
  const double cov = r.coverage_pct[col(iv, IntervalMethod::kTEB_B)].value;
  const double longer = r.longer_than_tdirect_pct[col(iv, IntervalMethod::kMpnaive)].value;
  const double len_teb = r.mean_length[col(iv, IntervalMethod::kTEB_B)].value;
  const double len_td = r.mean_length[col(iv, IntervalMethod::kTDirect)].value;
  const bool ok = std::abs(cov - 95.36) <= 1.5 && longer >= 99.0 && len_teb < len_td;
  return {ok, fmt::format("(15,100) R=500 B=500: TEB.B coverage {:.2f}% +- {:.2f} (95.36 +- 1.5); Mpnaive longer "
                          "than TDirect {:.2f}% (>= 99); mean length TEB.B {:.4f} < TDirect {:.4f}",
                          cov, r.coverage_pct[col(iv, IntervalMethod::kTEB_B)].mcse, longer, len_teb, len_td)};
}

Verdict criterion8() {
  const auto e = catalog("bernoulli-arcsin");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(0.15, 0.7), dev(1.0, 2.5), coin(0.0, 1.0);
  std::vector<double> factors;
  std::size_t fixtures = 0, shrinking = 0, fired = 0, sign_ok = 0;
  for (double A : {0.05, 0.02}) {
    for (int k = 0; k < 10; ++k) {
      // z sits a typical sampling deviation away from the EB estimate.
      const double theta = (coin(rng) < 0.5 ? -1.0 : 1.0) * th(rng);
      const double d = (coin(rng) < 0.5 ? -1.0 : 1.0) * dev(rng);
      std::vector<double> rel;
      for (double n : {1e2, 1e3, 1e4}) {
        const double D = 1.0 / n;
        const double z = theta + d * std::sqrt(D);
        const auto lp = transformed_lengths(z, D, theta, A, e.transform, e.coeffs, 0.05);
        const double lead = length_gap_leading_term(z, D, theta, A, e.transform, 0.05);
        rel.push_back(std::abs(lp.gap() - lead) / std::abs(lead));
        if (shorter_teb_predicate(z, theta, e.transform)) {
          ++fired;
          if (lp.gap() > 0.0) ++sign_ok;
        }
      }
      ++fixtures;
      bool dec = true;
      for (std::size_t j = 1; j < rel.size(); ++j) {
        factors.push_back(rel[j - 1] / rel[j]);
        dec &= rel[j] < rel[j - 1];
      }
      shrinking += dec;
    }
  }
  std::vector<double> sorted = factors;
  std::sort(sorted.begin(), sorted.end());
  const double worst = sorted.front();
  const double median = sorted[sorted.size() / 2];
  const bool ok = worst >= 3.0 && fired > 0 && sign_ok == fired;
  return {ok, fmt::format("{} fixtures x n in {{1e2,1e3,1e4}}: per-decade shrink of relative error min {:.2f}, median "
                          "{:.2f} (need >= 3; an O(n^-3/2) remainder caps it at sqrt(10) = 3.16); error decreasing "
                          "in {}/{} fixtures; predicate fired {} times, gap positive in {}",
                          fixtures, worst, median, shrinking, fixtures, fired, sign_ok)};
}

Verdict criterion9() {
  const std::vector<double> M{0.004, 0.011, 0.0075, 0.02};
  const double rel_delta = 0.037;  // bias delta_i = rel_delta * M_i
  const std::size_t R = 1000;
  std::vector<std::vector<double>> rows(R, std::vector<double>(M.size()));
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t i = 0; i < M.size(); ++i) {
      const double noise = (r % 2 == 0 ? 1.0 : -1.0) * 0.3 * M[i];
      rows[r][i] = M[i] * (1.0 + rel_delta) + noise;
    }
  }
  const double prb = percent_relative_bias(rows, M);
  const double err = std::abs(prb - 100.0 * rel_delta);
  return {err <= 1e-12, fmt::format("synthetic stream with delta/M = {}: PRB {:.15f}, error {:.1e} (<= 1e-12)",
                                    rel_delta, prb, err)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Verdict criterion10() {
  SimConfig a;
  a.m = 15;
  a.n = 10;
  a.R = 24;
  a.B_mse = 50;
  a.B_interval = 200;
  SimConfig b = a;
  b.m = 20;
  b.n = 100;
  const std::vector<SimConfig> grid{a, b};
  const auto root = std::filesystem::temp_directory_path() / "vstsae_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::filesystem::path> dirs;
  for (std::size_t workers : {1u, 4u, 8u, 1u}) {
    const auto dir = root / fmt::format("run{}_w{}", dirs.size(), workers);
    emit_tables(run_study(grid, StudyMenus::all(), workers), dir, TableFormat::kCsv);
    dirs.push_back(dir);
  }
  std::size_t files = 0, identical = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
    ++files;
    const std::string ref = slurp(entry.path());
    bool same = true;
    for (std::size_t k = 1; k < dirs.size(); ++k) same &= slurp(dirs[k] / entry.path().filename()) == ref;
    identical += same;
  }
  std::filesystem::remove_all(root);
  return {files == 8 && identical == files,
          fmt::format("two scenarios, all menus, runs with 1, 4, 8 and again 1 workers: {}/{} CSV files "
                      "byte-identical",
                      identical, files)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) {
    const int c = std::atoi(argv[k]);
    if (c < 1 || c > 10) {
      std::cerr << "usage: acceptance [criterion numbers 1-10]\n";
      return 2;
    }
    selected.insert(c);
  }
  if (selected.empty()) {
    for (int c = 1; c <= 10; ++c) selected.insert(c);
  }
  int failures = 0;
  for (int c : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = checks[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << fmt::format("criterion {:>2}: {} ({:.1f}s) {}\n", c, v.pass ? "PASS" : "FAIL", secs, v.detail)
              << std::flush;
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
