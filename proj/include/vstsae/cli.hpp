#pragma once

// Library half of the command-line tool: CSV ingest, the per-area analysis
// pipeline and the writers. The executable only parses flags and calls in.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vstsae/dataset.hpp"
#include "vstsae/eb_backtransform.hpp"
#include "vstsae/fh_core.hpp"
#include "vstsae/intervals.hpp"
#include "vstsae/mse.hpp"
#include "vstsae/transforms.hpp"

namespace vstsae::cli {

/// Exit codes per failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitBudget = 4;

/// Maps the active exception to an exit code; call inside a catch block.
int exit_code_for_current_exception() noexcept;

struct RunConfig {
  std::string family = "bernoulli-arcsin";
  std::vector<double> shape;
  VarianceMethod method = VarianceMethod::kREML;
  double alpha = 0.05;
  std::size_t B_mse = kDefaultMseBootstrap;
  std::size_t B_interval = kDefaultIntervalBootstrap;
  std::uint64_t seed = 20250601;
  std::filesystem::path input;
  std::filesystem::path output_dir;
  BoundaryMode boundary = BoundaryMode::kClamp;
  bool yates = false;
  bool add_intercept = true;
  std::vector<IntervalMethod> intervals;
  std::size_t workers = 1;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
  bool plot = false;

  /// Flat key = value rendition, one key per line, for run metadata.
  std::string to_config_text() const;
};

/// Output directory: explicit value, else $VSTSAE_OUTPUT_DIR, else ".".
std::filesystem::path resolve_output_dir(const std::filesystem::path& explicit_dir);

struct LoadReport {
  std::size_t rows = 0;
  std::vector<std::string> covariates;  // as named in the file, intercept excluded
  std::size_t clamped = 0;
  bool weights_from_units = false;
  DesignDiagnostics diagnostics;
};

struct LoadedData {
  std::vector<AreaRecord> records;
  std::vector<std::string> column_names;  // design columns, intercept included
  AreaDataset ds;
  LoadReport report;
};

/// Parses the area CSV. Required columns: area_id, y_direct, n, and either
/// sum_w2 or unit weight columns w1, w2, ... (blank cells for areas with fewer
/// units; each row is normalized to sum 1). Covariates are the columns
/// x1..xp. Optional: D, w_median. Errors name the row and column.
std::vector<AreaRecord> parse_area_csv(std::istream& in, const std::string& source,
                                       std::vector<std::string>& covariate_names, bool& weights_from_units);

LoadedData ingest_dataset(const std::filesystem::path& path, const CatalogEntry& entry, const RunConfig& cfg);
LoadedData ingest_dataset(std::istream& in, const std::string& source, const CatalogEntry& entry,
                          const RunConfig& cfg);

/// Writes records in the ingest schema (sum_w2 form) with round-trip precision.
void write_area_csv(std::ostream& out, const std::vector<AreaRecord>& records,
                    const std::vector<std::string>& covariate_names);

enum class Stage { kFit, kEstimate, kMse, kIntervals };

struct NamedIntervals {
  IntervalMethod method;
  std::vector<Interval> intervals;
};

struct AnalysisResult {
  ModelFit fit;
  EstimateBundle estimates;
  std::optional<MseEstimate> mse;
  std::vector<NamedIntervals> intervals;
  std::size_t interval_bootstrap_failures = 0;
};

/// Runs the pipeline up to `stage`. Bootstrap streams derive from cfg.seed.
AnalysisResult run_analysis(const AreaDataset& ds, const CatalogEntry& entry, const RunConfig& cfg, Stage stage);

/// Per-area CSV and JSON plus run metadata; returns the written paths.
std::vector<std::filesystem::path> write_results(const LoadedData& data, const AnalysisResult& res,
                                                 const CatalogEntry& entry, const RunConfig& cfg, Stage stage);

/// Static SVG: per-area EB estimates with interval whiskers, ordered by n.
void write_plot_svg(const std::filesystem::path& path, const LoadedData& data, const AnalysisResult& res);

/// One line per catalog family: name, domain, QVF, (a, b).
void print_transforms(std::ostream& out);

}  // namespace vstsae::cli
