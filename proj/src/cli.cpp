#include "vstsae/cli.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <boost/version.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"
#include "vstsae/errors.hpp"
#include "vstsae/kernels/kernels.hpp"
#include "vstsae/rng.hpp"

namespace vstsae::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line, const std::string& source, std::size_t row) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (quoted) throw InputError(fmt::format("{}: row {}: unterminated quote", source, row));
  cells.push_back(std::move(cell));
  for (auto& s : cells) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return cells;
}

// Column name of the form <prefix><digits>; returns the index or -1.
long indexed_column(const std::string& name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return -1;
  if (!std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c); })) return -1;
  return std::stol(name.substr(1));
}

double parse_number(const std::string& cell, const std::string& source, std::size_t row, const std::string& col) {
  if (cell.empty()) throw InputError(fmt::format("{}: row {}, column '{}': empty cell", source, row, col));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || !std::isfinite(v)) {
    throw InputError(fmt::format("{}: row {}, column '{}': '{}' is not a finite number", source, row, col, cell));
  }
  return v;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

json json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string isa_string() { return std::string(kernels::isa_name(kernels::active_isa())); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::kFit:
      return "fit";
    case Stage::kEstimate:
      return "estimate";
    case Stage::kMse:
      return "mse";
    case Stage::kIntervals:
      return "intervals";
  }
  return "?";
}

std::string boundary_name(BoundaryMode m) { return m == BoundaryMode::kClamp ? "clamp" : "reject"; }

}  // namespace

int exit_code_for_current_exception() noexcept {
  try {
    throw;
  } catch (const BootstrapBudgetError&) {
    return kExitBudget;
  } catch (const NumericalError&) {
    return kExitNumerical;
  } catch (const DomainError&) {
    return kExitNumerical;
  } catch (const InputError&) {
    return kExitInput;
  } catch (...) {
    return 1;
  }
}

std::string RunConfig::to_config_text() const {
  std::string s;
  s += fmt::format("family = {}\n", family);
  s += fmt::format("shape = {}\n", fmt::join(shape, " "));
  s += fmt::format("method = {}\n", method_name(method));
  s += fmt::format("alpha = {}\n", num(alpha));
  s += fmt::format("B_mse = {}\n", B_mse);
  s += fmt::format("B_interval = {}\n", B_interval);
  s += fmt::format("seed = {}\n", seed);
  s += fmt::format("input = {}\n", input.string());
  s += fmt::format("output_dir = {}\n", output_dir.string());
  s += fmt::format("boundary = {}\n", boundary_name(boundary));
  s += fmt::format("yates = {}\n", yates);
  s += fmt::format("intercept = {}\n", add_intercept);
  std::vector<std::string_view> names;
  for (auto m : intervals) names.push_back(interval_name(m));
  s += fmt::format("intervals = {}\n", fmt::join(names, " "));
  s += fmt::format("quadrature_nodes = {}\n", quadrature_nodes);
  s += fmt::format("plot = {}\n", plot);
  return s;
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("VSTSAE_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

std::vector<AreaRecord> parse_area_csv(std::istream& in, const std::string& source,
                                       std::vector<std::string>& covariate_names, bool& weights_from_units) {
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    ++row;
  }
  if (line.find_first_not_of(" \t\r") == std::string::npos) {
    throw InputError(fmt::format("{}: empty file; expected a header with columns area_id, y_direct, n, sum_w2",
                                 source));
  }
  const auto header = split_csv_line(line, source, row);
  std::map<std::string, std::size_t> col;
  std::vector<std::pair<long, std::size_t>> xcols, wcols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j].empty()) throw InputError(fmt::format("{}: header column {} is unnamed", source, j + 1));
    if (!col.emplace(header[j], j).second) {
      throw InputError(fmt::format("{}: header repeats column '{}'", source, header[j]));
    }
    if (long k = indexed_column(header[j], 'x'); k >= 0) xcols.emplace_back(k, j);
    if (long k = indexed_column(header[j], 'w'); k >= 0) wcols.emplace_back(k, j);
  }
  for (const char* required : {"area_id", "y_direct", "n"}) {
    if (!col.count(required)) throw InputError(fmt::format("{}: header is missing column '{}'", source, required));
  }
  const bool have_sum = col.count("sum_w2") > 0;
  if (!have_sum && wcols.empty()) {
    throw InputError(fmt::format("{}: header needs 'sum_w2' or unit weight columns w1, w2, ...", source));
  }
  if (have_sum && !wcols.empty()) {
    throw InputError(fmt::format("{}: give either 'sum_w2' or unit weight columns, not both", source));
  }
  weights_from_units = !have_sum;
  std::sort(xcols.begin(), xcols.end());
  std::sort(wcols.begin(), wcols.end());
  covariate_names.clear();
  for (const auto& [k, j] : xcols) covariate_names.push_back(header[j]);
  const auto opt_col = [&](const char* name) -> std::optional<std::size_t> {
    auto it = col.find(name);
    return it == col.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  };
  const auto d_col = opt_col("D");
  const auto wmed_col = opt_col("w_median");

  std::vector<AreaRecord> records;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line, source, row);
    if (cells.size() != header.size()) {
      throw InputError(fmt::format("{}: row {} has {} cells, header has {}", source, row, cells.size(),
                                   header.size()));
    }
    AreaRecord rec;
    rec.area_id = cells[col["area_id"]];
    if (rec.area_id.empty()) throw InputError(fmt::format("{}: row {}, column 'area_id': empty", source, row));
    rec.y_direct = parse_number(cells[col["y_direct"]], source, row, "y_direct");
    const double n = parse_number(cells[col["n"]], source, row, "n");
    if (n < 1.0 || n != std::floor(n)) {
      throw InputError(fmt::format("{}: row {}, column 'n': must be a positive integer, got {}", source, row,
                                   cells[col["n"]]));
    }
    rec.n = static_cast<int>(n);
    if (have_sum) {
      rec.sum_w2 = parse_number(cells[col["sum_w2"]], source, row, "sum_w2");
    } else {
      std::vector<double> w;
      for (const auto& [k, j] : wcols) {
        if (cells[j].empty()) continue;
        const double v = parse_number(cells[j], source, row, header[j]);
        if (!(v > 0.0)) throw InputError(fmt::format("{}: row {}, column '{}': weight must be > 0", source, row,
                                                     header[j]));
        w.push_back(v);
      }
      if (w.empty()) throw InputError(fmt::format("{}: row {}: no unit weights", source, row));
      if (w.size() != static_cast<std::size_t>(rec.n)) {
        throw InputError(fmt::format("{}: row {}: n = {} but {} unit weights given", source, row, rec.n, w.size()));
      }
      double total = 0.0;
      for (double v : w) total += v;
      rec.sum_w2 = 0.0;
      for (double& v : w) {
        v /= total;
        rec.sum_w2 += v * v;
      }
      rec.w_median = median_weight(w);
    }
    for (const auto& [k, j] : xcols) rec.x.push_back(parse_number(cells[j], source, row, header[j]));
    if (d_col && !cells[*d_col].empty()) {
      const double d = parse_number(cells[*d_col], source, row, "D");
      if (!(d > 0.0)) throw InputError(fmt::format("{}: row {}, column 'D': must be > 0, got {}", source, row, d));
      rec.D = d;
    }
    if (wmed_col && !cells[*wmed_col].empty()) {
      rec.w_median = parse_number(cells[*wmed_col], source, row, "w_median");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw InputError(fmt::format("{}: no data rows", source));
  return records;
}

LoadedData ingest_dataset(std::istream& in, const std::string& source, const CatalogEntry& entry,
                          const RunConfig& cfg) {
  LoadedData out;
  out.records = parse_area_csv(in, source, out.report.covariates, out.report.weights_from_units);
  if (cfg.add_intercept) {
    for (auto& r : out.records) r.x.insert(r.x.begin(), 1.0);
    out.column_names.push_back("intercept");
  }
  for (const auto& c : out.report.covariates) out.column_names.push_back(c);
  if (out.column_names.empty()) throw InputError(fmt::format("{}: no covariates and no intercept", source));
  out.ds = build_dataset(out.records, entry.transform, entry.qvf.k, cfg.boundary, out.column_names);
  out.report.rows = out.records.size();
  out.report.clamped = out.ds.clamped_count();
  out.report.diagnostics = out.ds.diagnostics();
  return out;
}

LoadedData ingest_dataset(const std::filesystem::path& path, const CatalogEntry& entry, const RunConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot open input file {}", path.string()));
  return ingest_dataset(f, path.string(), entry, cfg);
}

void write_area_csv(std::ostream& out, const std::vector<AreaRecord>& records,
                    const std::vector<std::string>& covariate_names) {
  bool any_d = false;
  for (const auto& r : records) any_d |= r.D.has_value();
  out << "area_id,y_direct,n,sum_w2";
  for (const auto& c : covariate_names) out << ',' << c;
  if (any_d) out << ",D";
  out << ",w_median\n";
  for (const auto& r : records) {
    if (r.x.size() != covariate_names.size()) {
      throw InputError(fmt::format("area {}: {} covariates for {} names", r.area_id, r.x.size(),
                                   covariate_names.size()));
    }
    out << r.area_id << ',' << num(r.y_direct) << ',' << r.n << ',' << num(r.sum_w2);
    for (double v : r.x) out << ',' << num(v);
    if (any_d) out << ',' << (r.D ? num(*r.D) : std::string());
    out << ',' << num(r.w_median) << '\n';
  }
}

AnalysisResult run_analysis(const AreaDataset& ds, const CatalogEntry& entry, const RunConfig& cfg, Stage stage) {
  const Transform& t = entry.transform;
  const ModelData data = ds.model_data();
  AnalysisResult res;
  res.fit = fit_model(data, cfg.method);
  res.estimates = point_estimates(ds, res.fit, t, entry.coeffs, cfg.quadrature_nodes);
  if (stage == Stage::kFit || stage == Stage::kEstimate) return res;

  if (stage == Stage::kMse || stage == Stage::kIntervals) {
    BootstrapOptions bo;
    bo.B = cfg.B_mse;
    bo.seed = stream_seed(cfg.seed, {tag(StreamTag::kMseBootstrap)});
    bo.workers = cfg.workers;
    bo.quadrature_nodes = cfg.quadrature_nodes;
    res.mse = ms_estimate(ds, res.fit, t, entry.coeffs, bo);
  }
  if (stage != Stage::kIntervals) return res;

  IntervalOptions io;
  io.alpha = cfg.alpha;
  io.B = cfg.B_interval;
  io.seed = stream_seed(cfg.seed, {tag(StreamTag::kIntervalBootstrap)});
  io.workers = cfg.workers;
  io.quadrature_nodes = cfg.quadrature_nodes;

  std::optional<ModelFit> fit_yl, fit_ll;
  std::optional<RootQuantiles> roots;
  const auto yl = [&]() -> const ModelFit& {
    if (!fit_yl) fit_yl = cfg.method == VarianceMethod::kYL ? res.fit : fit_model(data, VarianceMethod::kYL);
    return *fit_yl;
  };
  const auto ll = [&]() -> const ModelFit& {
    if (!fit_ll) fit_ll = cfg.method == VarianceMethod::kLL ? res.fit : fit_model(data, VarianceMethod::kLL);
    return *fit_ll;
  };

  for (IntervalMethod method : cfg.intervals) {
    NamedIntervals ni{method, {}};
    switch (method) {
      case IntervalMethod::kTEB_YL:
        ni.intervals = build_interval(ds, yl(), t, entry.coeffs, method, io);
        break;
      case IntervalMethod::kTEB_B:
      case IntervalMethod::kpTEB_B:
        if (!roots) {
          roots = bootstrap_root_quantiles(ds, ll(), cfg.alpha, cfg.B_interval, io.seed, cfg.workers);
          res.interval_bootstrap_failures = roots->failures;
        }
        ni.intervals = intervals_from_root_quantiles(ds, ll(), t, entry.coeffs, *roots, cfg.alpha,
                                                     method == IntervalMethod::kTEB_B);
        break;
      default:
        ni.intervals = build_interval(ds, res.fit, t, entry.coeffs, method, io);
        break;
    }
    if (cfg.yates) {
      for (std::size_t i = 0; i < ds.m(); ++i) {
        if (!(ds[i].w_median > 0.0)) {
          throw InputError(fmt::format("area {}: Yates correction needs w_median > 0", ds[i].area_id));
        }
        ni.intervals[i] = yates_correct(ni.intervals[i], ds[i].w_median, t.domain);
      }
    }
    res.intervals.push_back(std::move(ni));
  }
  return res;
}

std::vector<std::filesystem::path> write_results(const LoadedData& data, const AnalysisResult& res,
                                                 const CatalogEntry& entry, const RunConfig& cfg, Stage stage) {
  const std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const AreaDataset& ds = data.ds;
  const std::string stem = stage_name(stage);
  std::vector<std::filesystem::path> written;

  std::string csv = "area_id,n,y_direct,z,D,z_clamped,gamma,theta_eb";
  if (stage != Stage::kFit) csv += ",direct,nbt,peb,eb";
  if (res.mse) csv += ",m1,ms,pms";
  for (const auto& ni : res.intervals) {
    csv += fmt::format(",{0}_lower,{0}_upper", interval_name(ni.method));
  }
  csv += '\n';
  json areas = json::array();
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const auto& o = ds[i];
    csv += fmt::format("{},{},{},{},{},{},{},{}", o.area_id, o.n, num(o.y_direct), num(o.z), num(o.D),
                       o.z_clamped ? 1 : 0, num(res.fit.gamma[i]), num(res.fit.theta_eb[i]));
    json a = {{"area_id", o.area_id}, {"n", o.n},          {"y_direct", o.y_direct}, {"z", o.z},
              {"D", o.D},             {"z_clamped", o.z_clamped}, {"gamma", res.fit.gamma[i]},
              {"theta_eb", res.fit.theta_eb[i]}};
    if (stage != Stage::kFit) {
      const auto& e = res.estimates.areas[i];
      csv += fmt::format(",{},{},{},{}", num(e.direct), num(e.nbt), num(e.peb), num(e.eb));
      a["direct"] = e.direct;
      a["nbt"] = e.nbt;
      a["peb"] = e.peb;
      a["eb"] = e.eb;
    }
    if (res.mse) {
      csv += fmt::format(",{},{},{}", num(res.mse->m1[i]), num(res.mse->ms[i]), num(res.mse->pms[i]));
      a["mse"] = {{"m1", res.mse->m1[i]}, {"ms", res.mse->ms[i]}, {"pms", res.mse->pms[i]}};
    }
    json ivs = json::object();
    for (const auto& ni : res.intervals) {
      const auto& iv = ni.intervals[i];
      csv += fmt::format(",{},{}", num(iv.lower), num(iv.upper));
      ivs[std::string(interval_name(ni.method))] = {{"lower", json_num(iv.lower)}, {"upper", json_num(iv.upper)},
                                                    {"yates", iv.yates_applied}};
    }
    if (!res.intervals.empty()) a["intervals"] = ivs;
    areas.push_back(std::move(a));
    csv += '\n';
  }
  written.push_back(dir / (stem + "_areas.csv"));
  write_text(written.back(), csv);

  json fit = {{"method", std::string(method_name(res.fit.method))},
              {"A_hat", res.fit.A_hat},
              {"A_max", res.fit.A_max},
              {"reml_was_zero", res.fit.reml_was_zero}};
  json beta = json::object();
  for (Eigen::Index j = 0; j < res.fit.beta_hat.size(); ++j) {
    beta[data.column_names[static_cast<std::size_t>(j)]] = res.fit.beta_hat[j];
  }
  fit["beta"] = beta;
  written.push_back(dir / (stem + "_areas.json"));
  write_text(written.back(), json{{"fit", fit}, {"areas", areas}}.dump(2) + "\n");

  json meta;
  meta["tool"] = "vstsae";
  meta["version"] = "0.1.0";
  meta["command"] = stem;
  meta["seed"] = cfg.seed;
  meta["config"] = cfg.to_config_text();
  meta["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                             EIGEN_MINOR_VERSION)},
                       {"boost", BOOST_LIB_VERSION},
                       {"fmt", FMT_VERSION}};
  meta["simd"] = isa_string();
  meta["transform"] = {{"family", entry.transform.name},
                       {"shape", cfg.shape},
                       {"a", entry.coeffs.a},
                       {"b", entry.coeffs.b},
                       {"k", entry.qvf.k}};
  meta["input"] = {{"path", cfg.input.string()},
                   {"rows", data.report.rows},
                   {"covariates", data.report.covariates},
                   {"weights_from_units", data.report.weights_from_units}};
  meta["diagnostics"] = {{"rank", data.report.diagnostics.rank},
                         {"max_leverage", data.report.diagnostics.max_leverage},
                         {"leverage_bound", data.report.diagnostics.leverage_bound},
                         {"warnings", data.report.diagnostics.warnings}};
  meta["clamps"] = {{"direct_estimates", data.report.clamped},
                    {"quadrature_nodes", res.estimates.clamps.quadrature_nodes},
                    {"point_estimates", res.estimates.clamps.estimates}};
  meta["fit"] = fit;
  if (res.mse) {
    meta["mse_bootstrap"] = {{"B", res.mse->bootstrap_B}, {"failures", res.mse->failures},
                             {"floored", res.mse->floored}};
  }
  if (!res.intervals.empty()) {
    meta["interval_bootstrap"] = {{"B", cfg.B_interval}, {"failures", res.interval_bootstrap_failures}};
  }
  written.push_back(dir / (stem + "_metadata.json"));
  write_text(written.back(), meta.dump(2) + "\n");

  if (cfg.plot) {
    written.push_back(dir / (stem + "_plot.svg"));
    write_plot_svg(written.back(), data, res);
  }
  return written;
}

void write_plot_svg(const std::filesystem::path& path, const LoadedData& data, const AnalysisResult& res) {
  const AreaDataset& ds = data.ds;
  const std::size_t m = ds.m();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ds[a].n < ds[b].n; });

  const NamedIntervals* whiskers = res.intervals.empty() ? nullptr : &res.intervals.front();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    for (double v : {res.estimates.areas[i].eb, res.estimates.areas[i].direct}) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (whiskers) {
      lo = std::min(lo, whiskers->intervals[i].lower);
      hi = std::max(hi, whiskers->intervals[i].upper);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double W = 60.0 + 14.0 * static_cast<double>(m), H = 320.0, left = 50.0, top = 20.0, plot_h = 260.0;
  const auto ypix = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" font-family=\"sans-serif\" "
      "font-size=\"10\">\n",
      W, H);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top, top + plot_h);
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", left - 4.0,
                       ypix(v) + 3.0, v);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    const double x = left + 14.0 * (static_cast<double>(k) + 1.0);
    if (whiskers) {
      svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"gray\"/>\n", x,
                         ypix(whiskers->intervals[i].upper), ypix(whiskers->intervals[i].lower));
    }
    svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.5\" fill=\"none\" stroke=\"steelblue\"/>\n", x,
                       ypix(res.estimates.areas[i].direct));
    svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.5\" fill=\"firebrick\"/>\n", x,
                       ypix(res.estimates.areas[i].eb));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">areas ordered by n; filled: EB, open: direct{}</text>\n", left,
                     H - 8.0,
                     whiskers ? fmt::format(", bars: {}", interval_name(whiskers->method)) : std::string());
  svg += "</svg>\n";
  write_text(path, svg);
}

void print_transforms(std::ostream& out) {
  out << fmt::format("{:<18} {:<18} {:<34} {:>10} {:>10}\n", "family", "domain", "variance function (shape=1)", "a",
                     "b");
  for (std::string_view name : catalog_families()) {
    std::vector<double> shape(catalog_shape_arity(name), 1.0);
    const CatalogEntry e = catalog(name, shape);
    const auto& q = e.qvf;
    const std::string domain = fmt::format("({:g}, {:g})", q.mean_domain.lo, q.mean_domain.hi);
    const std::string vf = fmt::format("{:g} + {:g} mu + {:g} mu^2", q.c0, q.c1, q.c2);
    out << fmt::format("{:<18} {:<18} {:<34} {:>10.6g} {:>10.6g}\n", name, domain, vf, e.coeffs.a + 0.0, e.coeffs.b + 0.0);
  }
}

}  // namespace vstsae::cli
