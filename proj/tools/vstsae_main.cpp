#include <algorithm>
#include <iostream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vstsae/cli.hpp"
#include "vstsae/errors.hpp"
#include "vstsae/simharness.hpp"

using namespace vstsae;

namespace {

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Flags {
  cli::RunConfig cfg;
  std::string method = "REML";
  std::string boundary = "clamp";
  std::vector<std::string> intervals{"TDirect", "TEB.YL", "Boot", "TEB.B", "pTEB.B", "Mpnaive"};
};

void add_analysis_flags(CLI::App* sub, Flags& f) {
  sub->add_option("input", f.cfg.input, "Area-level CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--family", f.cfg.family, "Transform family (see `transforms`)")->capture_default_str();
  sub->add_option("--shape", f.cfg.shape, "Shape parameter for negbinomial / gamma-log (r) or lognormal (phi)");
  sub->add_option("--method", f.method, "Variance estimator: REML, YL or LL")->capture_default_str();
  sub->add_option("--output-dir", f.cfg.output_dir, "Output directory (default $VSTSAE_OUTPUT_DIR or .)");
  sub->add_option("--boundary", f.boundary, "Direct estimates on the domain edge: clamp or reject")
      ->capture_default_str();
  sub->add_flag("!--no-intercept", f.cfg.add_intercept, "Do not prepend an intercept column");
  sub->add_option("--seed", f.cfg.seed, "Master seed for bootstrap streams")->capture_default_str();
  sub->add_option("--workers", f.cfg.workers, "Worker threads for bootstrap loops")->capture_default_str();
  sub->add_option("--quadrature-nodes", f.cfg.quadrature_nodes, "Gauss-Hermite nodes")->capture_default_str();
  sub->add_flag("--plot", f.cfg.plot, "Also write an SVG of estimates ordered by n");
}

int run_analysis_command(Flags& f, cli::Stage stage) {
  f.cfg.method = parse_method(f.method);
  if (f.boundary == "clamp") {
    f.cfg.boundary = BoundaryMode::kClamp;
  } else if (f.boundary == "reject") {
    f.cfg.boundary = BoundaryMode::kReject;
  } else {
    throw InputError(fmt::format("--boundary must be clamp or reject, got '{}'", f.boundary));
  }
  f.cfg.intervals.clear();
  for (const auto& name : f.intervals) f.cfg.intervals.push_back(parse_interval(name));

  const CatalogEntry entry = catalog(f.cfg.family, f.cfg.shape);
  const cli::LoadedData data = cli::ingest_dataset(f.cfg.input, entry, f.cfg);
  for (const auto& w : data.report.diagnostics.warnings) std::cerr << "warning: " << w << '\n';
  if (data.report.clamped > 0) {
    std::cerr << fmt::format("note: {} direct estimate(s) moved off the domain boundary\n", data.report.clamped);
  }
  const cli::AnalysisResult res = cli::run_analysis(data.ds, entry, f.cfg, stage);
  for (const auto& p : cli::write_results(data, res, entry, f.cfg, stage)) std::cout << p.string() << '\n';
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical Bayes small-area estimation under variance-stabilizing transformations"};
  app.set_config("--config", "", "Read flags from a key = value file; command-line flags win");
  app.require_subcommand(1);

  Flags fit_f, est_f, mse_f, int_f;
  for (Flags* f : {&fit_f, &est_f, &mse_f, &int_f}) f->cfg.workers = default_workers();

  auto* fit = app.add_subcommand("fit", "Estimate A and beta; write shrinkage factors and EBLUPs");
  add_analysis_flags(fit, fit_f);
  auto* est = app.add_subcommand("estimate", "Direct, NBT, pEB and EB point estimates");
  add_analysis_flags(est, est_f);
  auto* mse = app.add_subcommand("mse", "Point estimates plus M1, Ms and pMs MSE estimates");
  add_analysis_flags(mse, mse_f);
  mse->add_option("--B", mse_f.cfg.B_mse, "MSE bootstrap replicates")->capture_default_str();
  auto* ivs = app.add_subcommand("intervals", "Point estimates, MSEs and confidence intervals");
  add_analysis_flags(ivs, int_f);
  ivs->add_option("--B", int_f.cfg.B_mse, "MSE bootstrap replicates")->capture_default_str();
  ivs->add_option("--B-interval", int_f.cfg.B_interval, "Interval bootstrap replicates")->capture_default_str();
  ivs->add_option("--alpha", int_f.cfg.alpha, "1 - nominal coverage")->capture_default_str();
  ivs->add_option("--interval", int_f.intervals, "Interval methods to build")->capture_default_str();
  ivs->add_flag("--yates", int_f.cfg.yates, "Widen each side by half the median unit weight");

  SimConfig sim;
  std::vector<std::size_t> sim_m{15, 50}, sim_n{10, 100};
  std::string sim_out, sim_format = "both", prrmse = "conventional";
  std::size_t sim_workers = default_workers();
  bool no_mse = false, no_intervals = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study over an (m, n) grid; writes eight tables");
  simulate->add_option("--m", sim_m, "Numbers of areas")->capture_default_str();
  simulate->add_option("--n", sim_n, "Units per area")->capture_default_str();
  simulate->add_option("--R", sim.R, "Replicates per scenario")->capture_default_str();
  simulate->add_option("--B-mse", sim.B_mse, "MSE bootstrap replicates")->capture_default_str();
  simulate->add_option("--B-interval", sim.B_interval, "Interval bootstrap replicates")->capture_default_str();
  simulate->add_option("--A", sim.A_true, "True random-effect variance")->capture_default_str();
  simulate->add_option("--mu", sim.mu_true, "True transformed-scale mean")->capture_default_str();
  simulate->add_option("--seed", sim.master_seed, "Master seed")->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "1 - nominal coverage")->capture_default_str();
  simulate->add_option("--prrmse", prrmse, "PRRMSE reading: conventional or literal")->capture_default_str();
  simulate->add_option("--workers", sim_workers, "Worker threads")->capture_default_str();
  simulate->add_option("--output-dir", sim_out, "Output directory (default $VSTSAE_OUTPUT_DIR or .)");
  simulate->add_option("--format", sim_format, "csv, json or both")->capture_default_str();
  simulate->add_flag("--no-mse", no_mse, "Skip MSE estimators");
  simulate->add_flag("--no-intervals", no_intervals, "Skip intervals");

  auto* transforms = app.add_subcommand("transforms", "List the transform catalog");
  transforms->add_subcommand("list", "Print name, domain, variance function and (a, b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  try {
    if (*fit) return run_analysis_command(fit_f, cli::Stage::kFit);
    if (*est) return run_analysis_command(est_f, cli::Stage::kEstimate);
    if (*mse) return run_analysis_command(mse_f, cli::Stage::kMse);
    if (*ivs) return run_analysis_command(int_f, cli::Stage::kIntervals);
    if (*transforms) {
      cli::print_transforms(std::cout);
      return cli::kExitOk;
    }
    if (*simulate) {
      if (prrmse == "conventional") {
        sim.prrmse_reading = PrrmseReading::kConventional;
      } else if (prrmse == "literal") {
        sim.prrmse_reading = PrrmseReading::kLiteral;
      } else {
        throw InputError(fmt::format("--prrmse must be conventional or literal, got '{}'", prrmse));
      }
      TableFormat format = TableFormat::kBoth;
      if (sim_format == "csv") {
        format = TableFormat::kCsv;
      } else if (sim_format == "json") {
        format = TableFormat::kJson;
      } else if (sim_format != "both") {
        throw InputError(fmt::format("--format must be csv, json or both, got '{}'", sim_format));
      }
      StudyMenus menus = StudyMenus::all();
      if (no_mse) menus.mse.clear();
      if (no_intervals) menus.intervals.clear();
      std::vector<SimConfig> grid;
      for (std::size_t m : sim_m) {
        for (std::size_t n : sim_n) {
          SimConfig c = sim;
          c.m = m;
          c.n = n;
          grid.push_back(c);
        }
      }
      const SimReport report = run_study(grid, menus, sim_workers);
      for (const auto& s : report.scenarios) {
        if (s.weights_cycled) {
          std::cerr << fmt::format("note: n = {} is not a multiple of the weight pattern length; pattern cycled\n",
                                   s.config.n);
        }
      }
      for (const auto& p : emit_tables(report, cli::resolve_output_dir(sim_out), format)) {
        std::cout << p.string() << '\n';
      }
      return cli::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for_current_exception();
  }
  return cli::kExitOk;
}
