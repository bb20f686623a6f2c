#include "pvthresh/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "pvthresh/baseline.hpp"
#include "pvthresh/csv_io.hpp"
#include "pvthresh/error.hpp"
#include "pvthresh/fitters.hpp"
#include "pvthresh/models.hpp"
#include "pvthresh/reports.hpp"
#include "pvthresh/simulation.hpp"
#include "pvthresh/subsampling.hpp"

namespace pvthresh {

namespace {

const std::vector<Allocation> kTableRows = {{5, 5},   {5, 10},  {10, 10}, {10, 20},
                                            {10, 50}, {20, 50}, {50, 100}};

struct EstimateOptions {
  std::string input;
  std::string tau = "method1";
  std::string variance = "pooled";
  std::optional<double> sigma0;
  std::string dist = "normal";
  std::optional<double> p0;
  std::optional<long> trials;
  std::string fitter = "stump";
  std::optional<double> zeta0;
  std::vector<double> tau_range;
  std::vector<double> min_range;
  std::vector<double> max_range;
  std::size_t grid = 2001;
  std::string emit_pvalues;
  std::string json_path;
};

struct SimulateOptions {
  std::string model = "M0";
  std::size_t m = 10;
  std::size_t n = 50;
  double sigma = 0.1;
  std::string estimator = "stump";
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string variance;
  std::optional<double> sigma0;
  std::string json_path;
  std::string csv_path;
  bool wall_time = false;
  bool table1 = false, table2 = false, table3 = false, table4 = false;
};

struct AllocateOptions {
  std::string model = "M1";
  double sigma = 0.1;
  std::size_t budget = 100;
  std::string estimator = "method1";
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  std::size_t slack = 1;
  std::size_t threads = 0;
  std::string json_path;
  std::string csv_path;
  bool wall_time = false;
  bool table4 = false;
};

struct CiOptions {
  std::string input;
  std::size_t block_size = 0;
  std::size_t iterations = 1000;
  std::string variant = "all";
  double level = 0.95;
  std::uint64_t seed = 1;
  std::optional<double> tau;
  std::vector<double> tau_range;
  std::string variance = "pooled";
  std::optional<double> sigma0;
  std::string dist = "normal";
  std::size_t threads = 0;
  std::string json_path;
  std::string csv_path;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

void emit_json(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::optional<std::pair<double, double>> as_range(const std::vector<double>& v, const char* flag) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 2) throw Error(ErrorCode::invalid_argument, std::string(flag) + " takes two values");
  return std::make_pair(v[0], v[1]);
}

VarianceModel parse_variance(const std::string& name, std::optional<double> sigma0) {
  if (name == "known") {
    if (!sigma0) throw Error(ErrorCode::invalid_argument, "--variance known needs --sigma0");
    return VarianceModel::known(*sigma0);
  }
  if (name == "pooled") return VarianceModel::pooled();
  if (name == "per-dose") return VarianceModel::per_dose();
  throw Error(ErrorCode::invalid_argument, "unknown variance model '" + name + "'");
}

NullDistribution parse_distribution(const std::string& name) {
  if (name == "normal") return NullDistribution::normal;
  if (name == "t") return NullDistribution::t;
  throw Error(ErrorCode::invalid_argument, "unknown distribution '" + name + "'");
}

Json rescale_json(const RescaleMap& map) {
  return Json{{"identity", map.identity}, {"lo", map.lo}, {"hi", map.hi}};
}

Json pvalues_json(const PValueSeries& series) {
  Json arr = Json::array();
  for (const auto& p : series.points()) arr.push_back(Json{{"x", p.x}, {"z", p.z}});
  return arr;
}

Json region_json(const RegionEstimate& r, const RescaleMap& map) {
  Json j;
  j["empty"] = r.interval.empty;
  j["a_hat"] = r.interval.a_hat;
  j["b_hat"] = r.interval.b_hat;
  j["a_hat_original"] = map.to_original(r.interval.a_hat);
  j["b_hat_original"] = map.to_original(r.interval.b_hat);
  j["level"] = r.level;
  j["sse"] = r.interval.sse;
  j["tau_range"] = Json::array({r.tau_range.first, r.tau_range.second});
  return j;
}

// The series the fitter works on, plus the baseline behind it.
struct SeriesChoice {
  PValueSeries series;
  std::optional<double> tau_hat;
  std::string method;
  std::optional<std::pair<double, double>> tau_range;
};

SeriesChoice choose_series(const CsvData& csv, const EstimateOptions& o, const VarianceModel& variance,
                           const TauSearch& search) {
  if (csv.value_column == "z") {
    std::vector<PValuePoint> pts;
    for (const auto& d : csv.data.doses()) {
      if (d.count() != 1) throw Error(ErrorCode::parse_error, "repeated covariate in p-value input");
      pts.push_back({d.x, d.responses.front()});
    }
    return {PValueSeries(std::move(pts)), std::nullopt, "user-pvalues", std::nullopt};
  }
  if (o.dist == "binomial-normal" || o.dist == "binomial-exact") {
    if (!o.p0) throw Error(ErrorCode::invalid_argument, "binomial p-values need --p0");
    const auto counts = binomial_counts(csv, o.trials);
    return {pvalues_binomial(counts, *o.p0, o.dist == "binomial-exact"), *o.p0, "known-tau",
            std::nullopt};
  }
  const NullDistribution dist = parse_distribution(o.dist);
  if (o.tau == "method1") {
    auto est = estimate_method1(csv.data, variance, search, dist);
    return {std::move(est.pvalues), est.tau_hat, "method1", est.tau_range};
  }
  if (o.tau == "method2") {
    auto est = estimate_method2(csv.data, variance, dist);
    return {std::move(est.pvalues), est.tau_hat, "method2", std::nullopt};
  }
  char* end = nullptr;
  const double tau = std::strtod(o.tau.c_str(), &end);
  if (o.tau.empty() || *end != '\0') {
    throw Error(ErrorCode::invalid_argument, "--tau must be method1, method2 or a number");
  }
  return {pvalues_for_null(csv.data, tau, variance, dist), tau, "known-tau", std::nullopt};
}

Json run_estimate(const EstimateOptions& o) {
  const CsvData csv = ingest_csv(o.input);
  const bool binomial = o.dist == "binomial-normal" || o.dist == "binomial-exact";
  if (binomial) {
    // Validates integer successes and trial counts before any fitting.
    if (!o.p0) throw Error(ErrorCode::invalid_argument, "binomial p-values need --p0");
    binomial_counts(csv, o.trials);
  }
  const VarianceModel variance = parse_variance(o.variance, o.sigma0);
  TauSearch search;
  search.grid_size = o.grid;
  search.range = as_range(o.tau_range, "--tau-range");

  Json j;
  j["command"] = "estimate";
  j["input"] = o.input;
  j["fitter"] = o.fitter;
  j["variance"] = std::string(variance_name(variance.kind));
  j["distribution"] = o.dist;
  j["rescale"] = rescale_json(csv.map);
  std::optional<PValueSeries> emitted;

  if (o.fitter == "minmax") {
    if (binomial) throw Error(ErrorCode::invalid_argument, "minmax needs continuous responses");
    TauSearch lo = search, hi = search;
    lo.range = as_range(o.min_range, "--min-range");
    hi.range = as_range(o.max_range, "--max-range");
    if (!lo.range || !hi.range) {
      throw Error(ErrorCode::invalid_argument, "minmax needs --min-range and --max-range");
    }
    const auto r = estimate_minmax_regions(csv.data, variance, lo, hi, parse_distribution(o.dist));
    j["method"] = "minmax";
    j["min"] = region_json(r.min, csv.map);
    j["max"] = region_json(r.max, csv.map);
    j["criterion"] = r.min.interval.sse + r.max.interval.sse;
    emitted = r.min.pvalues;
  } else if (o.fitter == "composite") {
    if (!o.zeta0) throw Error(ErrorCode::invalid_argument, "composite fitter needs --zeta0");
    PValueSeries series;
    if (binomial) {
      series = pvalues_binomial(binomial_counts(csv, o.trials), *o.zeta0, o.dist == "binomial-exact");
    } else {
      series = pvalues_composite(csv.data, *o.zeta0, variance, parse_distribution(o.dist));
    }
    const auto fit = fit_stump_fixed(series, 1.0, 0.0);
    j["method"] = "composite";
    j["zeta0"] = *o.zeta0;
    j["d_hat"] = fit.d_hat;
    j["d_hat_original"] = csv.map.to_original(fit.d_hat);
    j["criterion"] = fit.sse;
    j["sse"] = fit.sse;
    emitted = std::move(series);
  } else if (o.fitter == "interval" && !binomial && csv.value_column != "z" && o.tau == "method1") {
    TauSearch s = search;
    if (!o.min_range.empty()) s.range = as_range(o.min_range, "--min-range");
    const auto r = estimate_min_region(csv.data, variance, s, parse_distribution(o.dist));
    j["method"] = "interval";
    j["tau_hat"] = r.level;
    j["min"] = region_json(r, csv.map);
    j["criterion"] = r.interval.sse;
    emitted = r.pvalues;
  } else {
    SeriesChoice choice = choose_series(csv, o, variance, search);
    j["method"] = choice.method;
    j["tau_hat"] = choice.tau_hat ? Json(*choice.tau_hat) : Json(nullptr);
    if (choice.tau_range) {
      j["tau_range"] = Json::array({choice.tau_range->first, choice.tau_range->second});
    }
    const auto& z = choice.series;
    if (o.fitter == "stump") {
      const auto fit = fit_stump_fixed(z, 0.5, 0.0);
      j["d_hat"] = fit.d_hat;
      j["criterion"] = fit.sse;
      j["sse"] = fit.sse;
    } else if (o.fitter == "stump3") {
      const auto fit = fit_stump_adaptive(z);
      j["d_hat"] = fit.d_hat;
      j["left_level"] = fit.left_level;
      j["right_level"] = fit.right_level;
      j["criterion"] = fit.sse;
      j["sse"] = fit.sse;
    } else if (o.fitter == "sigmoid") {
      const auto fit = fit_sigmoid(z);
      j["d_hat"] = fit.d_hat;
      j["steepness"] = fit.steepness;
      j["criterion"] = fit.sse;
      j["sse"] = fit.sse;
    } else if (o.fitter == "interval") {
      const auto fit = fit_baseline_interval(z, 0.5, 0.0);
      j["interval"] = Json{{"empty", fit.empty},
                           {"a_hat", fit.a_hat},
                           {"b_hat", fit.b_hat},
                           {"a_hat_original", csv.map.to_original(fit.a_hat)},
                           {"b_hat_original", csv.map.to_original(fit.b_hat)}};
      j["criterion"] = fit.sse;
      j["sse"] = fit.sse;
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown fitter '" + o.fitter + "'");
    }
    if (j.contains("d_hat")) j["d_hat_original"] = csv.map.to_original(j["d_hat"].get<double>());
    emitted = z;
  }

  if (!o.emit_pvalues.empty() && emitted) {
    write_pvalue_csv(o.emit_pvalues, *emitted);
    j["pvalues"] = pvalues_json(*emitted);
    j["pvalues_csv"] = o.emit_pvalues;
  }
  return j;
}

void add_estimate_options(CLI::App* app, EstimateOptions& o) {
  app->add_option("-i,--input", o.input, "Long-format CSV with header x,y (or x,z, x,y,count)")
      ->required();
  app->add_option("--tau", o.tau, "Baseline: method1, method2 or a known value");
  app->add_option("--variance", o.variance, "known | pooled | per-dose");
  app->add_option("--sigma0", o.sigma0, "Noise SD for --variance known");
  app->add_option("--dist", o.dist, "normal | t | binomial-normal | binomial-exact");
  app->add_option("--p0", o.p0, "Baseline success probability for binomial data");
  app->add_option("--trials", o.trials, "Trials per row when the CSV has no count column");
  app->add_option("--fitter", o.fitter, "stump | stump3 | sigmoid | composite | interval | minmax");
  app->add_option("--zeta0", o.zeta0, "Level for the composite hypothesis");
  app->add_option("--tau-range", o.tau_range, "Restrict the baseline search to [lo, hi]")->expected(2);
  app->add_option("--min-range", o.min_range, "Baseline range for the minimum region")->expected(2);
  app->add_option("--max-range", o.max_range, "Baseline range for the maximum region")->expected(2);
  app->add_option("--grid", o.grid, "Grid size of the baseline search");
  app->add_option("--emit-pvalues", o.emit_pvalues, "Write the per-dose p-values as CSV");
  app->add_option("-o,--json", o.json_path, "Write the JSON report here instead of stdout");
}

std::vector<SimulationConfig> table_cells(int table, std::size_t reps, std::uint64_t seed,
                                          std::size_t threads) {
  std::vector<std::string> models;
  std::vector<EstimatorKind> estimators;
  switch (table) {
    case 1:
      models = {"M0", "M1", "M2", "M3", "M4"};
      estimators = {EstimatorKind::stump, EstimatorKind::sigmoid};
      break;
    case 2:
      models = {"M3", "M4"};
      estimators = {EstimatorKind::method1, EstimatorKind::method2};
      break;
    default:
      models = {"M1tilde", "M2tilde"};
      estimators = {EstimatorKind::stump, EstimatorKind::method1, EstimatorKind::method2};
      break;
  }
  std::vector<SimulationConfig> out;
  for (double sigma : {0.1, 0.3}) {
    for (const auto& name : models) {
      for (const auto& row : kTableRows) {
        for (auto est : estimators) {
          SimulationConfig c;
          c.model = RegressionModel::from_name(name);
          c.m = row.m;
          c.n = row.n;
          c.sigma = sigma;
          c.estimator = est;
          c.reps = reps;
          c.seed = seed;
          c.workers = threads;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

std::vector<AllocationConfig> table4_sweeps(std::size_t reps, std::uint64_t seed, std::size_t threads) {
  std::vector<AllocationConfig> out;
  for (const char* name : {"M1", "M5"}) {
    for (auto est : {EstimatorKind::method1, EstimatorKind::method2}) {
      for (std::size_t budget : {100, 200}) {
        for (double sigma : {0.1, 0.3}) {
          AllocationConfig a;
          a.model = RegressionModel::from_name(name);
          a.estimator = est;
          a.budget = budget;
          a.sigma = sigma;
          a.reps = reps;
          a.seed = seed;
          a.workers = threads;
          out.push_back(std::move(a));
        }
      }
    }
  }
  return out;
}

Json run_table4(std::size_t reps, std::uint64_t seed, std::size_t threads, bool wall,
                std::vector<CellResult>& all_cells) {
  Json sweeps = Json::array();
  for (const auto& a : table4_sweeps(reps, seed, threads)) {
    const auto result = allocation_sweep(a);
    Json s = allocation_json(result, a.budget, wall);
    s["model"] = a.model.label();
    s["sigma"] = a.sigma;
    s["estimator"] = std::string(estimator_name(a.estimator));
    sweeps.push_back(std::move(s));
    all_cells.insert(all_cells.end(), result.cells.begin(), result.cells.end());
  }
  Json j;
  j["command"] = "allocate";
  j["preset"] = "table4";
  j["sweeps"] = std::move(sweeps);
  return j;
}

void run_simulate(const SimulateOptions& o, std::ostream& out) {
  const int presets = o.table1 + o.table2 + o.table3 + o.table4;
  if (presets > 1) throw Error(ErrorCode::invalid_argument, "choose at most one table preset");
  std::vector<CellResult> cells;
  Json report;
  if (o.table4) {
    report = run_table4(o.reps, o.seed, o.threads, o.wall_time, cells);
  } else {
    std::vector<SimulationConfig> configs;
    if (presets == 1) {
      configs = table_cells(o.table1 ? 1 : o.table2 ? 2 : 3, o.reps, o.seed, o.threads);
    } else {
      SimulationConfig c;
      c.model = RegressionModel::from_name(o.model);
      c.m = o.m;
      c.n = o.n;
      c.sigma = o.sigma;
      c.estimator = estimator_from_name(o.estimator);
      c.reps = o.reps;
      c.seed = o.seed;
      c.workers = o.threads;
      if (!o.variance.empty()) c.variance = parse_variance(o.variance, o.sigma0);
      configs.push_back(std::move(c));
    }
    for (const auto& c : configs) cells.push_back(run_cell(c));
    report = simulation_json(cells, o.wall_time);
    if (presets == 1) report["preset"] = o.table1 ? "table1" : o.table2 ? "table2" : "table3";
  }
  emit_json(report, o.json_path, out);
  if (!o.csv_path.empty()) write_file(o.csv_path, simulation_csv(cells, o.wall_time));
}

void run_allocate(const AllocateOptions& o, std::ostream& out) {
  std::vector<CellResult> cells;
  Json report;
  if (o.table4) {
    report = run_table4(o.reps, o.seed, o.threads, o.wall_time, cells);
  } else {
    AllocationConfig a;
    a.model = RegressionModel::from_name(o.model);
    a.sigma = o.sigma;
    a.budget = o.budget;
    a.estimator = estimator_from_name(o.estimator);
    a.reps = o.reps;
    a.seed = o.seed;
    a.slack = o.slack;
    a.workers = o.threads;
    if (!(a.sigma > 0.0)) throw Error(ErrorCode::invalid_config, "sigma must be positive");
    const auto result = allocation_sweep(a);
    report = allocation_json(result, a.budget, o.wall_time);
    report["model"] = a.model.label();
    report["sigma"] = a.sigma;
    report["estimator"] = std::string(estimator_name(a.estimator));
    cells = result.cells;
  }
  emit_json(report, o.json_path, out);
  if (!o.csv_path.empty()) write_file(o.csv_path, simulation_csv(cells, o.wall_time));
}

void run_ci(const CiOptions& o, std::ostream& out) {
  const CsvData csv = ingest_csv(o.input);
  const VarianceModel variance = parse_variance(o.variance, o.sigma0);
  const NullDistribution dist = parse_distribution(o.dist);
  std::vector<SubsampleVariant> variants;
  if (o.variant == "all") {
    variants = {SubsampleVariant::v1a, SubsampleVariant::v1b, SubsampleVariant::v2};
  } else {
    variants = {variant_from_name(o.variant)};
  }
  std::vector<ConfidenceInterval> intervals;
  Json arr = Json::array();
  for (auto v : variants) {
    SubsampleConfig c;
    c.block_size = o.block_size;
    c.iterations = o.iterations;
    c.variant = v;
    c.level = o.level;
    c.seed = o.seed;
    c.known_tau = o.tau;
    c.tau_search.range = as_range(o.tau_range, "--tau-range");
    c.workers = o.threads;
    intervals.push_back(subsample_ci(csv.data, c, variance, dist));
    Json j = ci_json(intervals.back());
    j["lower_original"] = csv.map.to_original(intervals.back().lower);
    j["upper_original"] = csv.map.to_original(intervals.back().upper);
    arr.push_back(std::move(j));
  }
  Json report;
  report["command"] = "ci";
  report["input"] = o.input;
  report["variance"] = std::string(variance_name(variance.kind));
  report["rescale"] = rescale_json(csv.map);
  report["intervals"] = std::move(arr);
  emit_json(report, o.json_path, out);
  if (!o.csv_path.empty()) write_file(o.csv_path, ci_csv(intervals));
}

void report_error(std::ostream& err, std::string_view code, int status, const std::string& message) {
  const char* category = status == 2 ? "usage" : status == 3 ? "data" : "numeric";
  Json j;
  j["error"] = Json{{"code", code}, {"category", category}, {"exit_status", status}, {"message", message}};
  err << j.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Threshold estimation from p-values"};
  app.name("pvthresh");
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the threshold from a data file");
  add_estimate_options(estimate, est);

  EstimateOptions multi;
  multi.fitter = "minmax";
  auto* multi_cmd = app.add_subcommand("multi", "Estimate baseline regions (interval or minmax fitter)");
  add_estimate_options(multi_cmd, multi);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo RMSE for one cell or a table preset");
  simulate->add_option("--model", sim.model, "M0..M5, M1tilde, M2tilde");
  simulate->add_option("--m", sim.m, "Replicates per dose");
  simulate->add_option("--n", sim.n, "Number of doses");
  simulate->add_option("--sigma", sim.sigma, "Noise SD");
  simulate->add_option("--estimator", sim.estimator, "stump | stump3 | sigmoid | method1 | method2 | kink-p2");
  simulate->add_option("--reps", sim.reps, "Monte Carlo replicates");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  simulate->add_option("--variance", sim.variance, "Override the estimator's variance model");
  simulate->add_option("--sigma0", sim.sigma0, "Noise SD for --variance known");
  simulate->add_option("-o,--json", sim.json_path, "JSON report path (default stdout)");
  simulate->add_option("--csv", sim.csv_path, "CSV report path");
  simulate->add_flag("--include-wall-time", sim.wall_time, "Record wall time in the reports");
  simulate->add_flag("--table1", sim.table1, "Stump vs sigmoid grid");
  simulate->add_flag("--table2", sim.table2, "Method 1 vs Method 2 on M3 and M4");
  simulate->add_flag("--table3", sim.table3, "Boundary thresholds M1tilde and M2tilde");
  simulate->add_flag("--table4", sim.table4, "Optimal allocations for M1 and M5");

  AllocateOptions alloc;
  auto* allocate = app.add_subcommand("allocate", "Budget allocation sweep over (m, n)");
  allocate->add_option("--model", alloc.model, "M0..M5, M1tilde, M2tilde");
  allocate->add_option("--sigma", alloc.sigma, "Noise SD");
  allocate->add_option("--budget", alloc.budget, "Total sample budget N");
  allocate->add_option("--estimator", alloc.estimator, "Estimator");
  allocate->add_option("--reps", alloc.reps, "Monte Carlo replicates per cell");
  allocate->add_option("--seed", alloc.seed, "Master seed");
  allocate->add_option("--slack", alloc.slack, "Budget slack of the approximate-budget rule");
  allocate->add_option("--threads", alloc.threads, "Worker threads (0: all cores)");
  allocate->add_option("-o,--json", alloc.json_path, "JSON report path (default stdout)");
  allocate->add_option("--csv", alloc.csv_path, "CSV report path");
  allocate->add_flag("--include-wall-time", alloc.wall_time, "Record wall time in the reports");
  allocate->add_flag("--table4", alloc.table4, "Optimal allocations for M1 and M5");

  CiOptions ci;
  auto* ci_cmd = app.add_subcommand("ci", "Subsampling confidence interval for the threshold");
  ci_cmd->add_option("-i,--input", ci.input, "Long-format CSV with header x,y")->required();
  ci_cmd->add_option("--block-size", ci.block_size, "Doses per subsample (m_n)")->required();
  ci_cmd->add_option("--iterations", ci.iterations, "Subsamples B");
  ci_cmd->add_option("--variant", ci.variant, "1a | 1b | 2 | all");
  ci_cmd->add_option("--level", ci.level, "Confidence level");
  ci_cmd->add_option("--seed", ci.seed, "Master seed");
  ci_cmd->add_option("--tau", ci.tau, "Known baseline for the Method 1 variants");
  ci_cmd->add_option("--tau-range", ci.tau_range, "Restrict the baseline search")->expected(2);
  ci_cmd->add_option("--variance", ci.variance, "known | pooled | per-dose");
  ci_cmd->add_option("--sigma0", ci.sigma0, "Noise SD for --variance known");
  ci_cmd->add_option("--dist", ci.dist, "normal | t");
  ci_cmd->add_option("--threads", ci.threads, "Worker threads (0: all cores)");
  ci_cmd->add_option("-o,--json", ci.json_path, "JSON report path (default stdout)");
  ci_cmd->add_option("--csv", ci.csv_path, "CSV report path");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("pvthresh");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "invalid-argument", 2, e.what());
    return 2;
  }

  try {
    if (estimate->parsed()) {
      emit_json(run_estimate(est), est.json_path, out);
    } else if (multi_cmd->parsed()) {
      if (multi.fitter != "minmax" && multi.fitter != "interval") {
        throw Error(ErrorCode::invalid_argument, "multi accepts only the interval and minmax fitters");
      }
      Json j = run_estimate(multi);
      j["command"] = "multi";
      emit_json(j, multi.json_path, out);
    } else if (simulate->parsed()) {
      run_simulate(sim, out);
    } else if (allocate->parsed()) {
      run_allocate(alloc, out);
    } else if (ci_cmd->parsed()) {
      run_ci(ci, out);
    }
  } catch (const Error& e) {
    report_error(err, e.code_name(), e.exit_status(), e.what());
    return e.exit_status();
  } catch (const std::exception& e) {
    report_error(err, "internal-error", 4, e.what());
    return 4;
  }
  return 0;
}

}  // namespace pvthresh
