#include "pvthresh/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pvthresh/baseline.hpp"
#include "pvthresh/error.hpp"
#include "pvthresh/fitters.hpp"
#include "pvthresh/kink.hpp"
#include "pvthresh/parallel.hpp"

namespace pvthresh {

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::stump: return "stump";
    case EstimatorKind::stump3: return "stump3";
    case EstimatorKind::sigmoid: return "sigmoid";
    case EstimatorKind::method1: return "method1";
    case EstimatorKind::method2: return "method2";
    case EstimatorKind::kink_p2: return "kink-p2";
  }
  return "stump";
}

EstimatorKind estimator_from_name(std::string_view name) {
  for (auto k : {EstimatorKind::stump, EstimatorKind::stump3, EstimatorKind::sigmoid,
                 EstimatorKind::method1, EstimatorKind::method2, EstimatorKind::kink_p2}) {
    if (estimator_name(k) == name) return k;
  }
  if (name == "p2" || name == "kink_p2") return EstimatorKind::kink_p2;
  throw Error(ErrorCode::invalid_config, "unknown estimator '" + std::string(name) + "'");
}

bool estimates_tau(EstimatorKind kind) {
  return kind == EstimatorKind::method1 || kind == EstimatorKind::method2;
}

void SimulationConfig::validate() const {
  if (m < 1) throw Error(ErrorCode::invalid_config, "m must be at least 1");
  if (n < 1) throw Error(ErrorCode::invalid_config, "n must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::invalid_config, "sigma must be positive");
  }
  if (reps < 1) throw Error(ErrorCode::invalid_config, "reps must be at least 1");
}

std::string CellResult::key() const {
  char sig[32];
  const auto res = std::to_chars(sig, sig + sizeof sig, sigma);
  return "(" + model + ", " + std::to_string(m) + ", " + std::to_string(n) + ", " +
         std::string(sig, res.ptr) + ", " + std::string(estimator_name(estimator)) + ")";
}

std::vector<double> design_points(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
  }
  return x;
}

DoseResponseData simulate_data(const RegressionModel& model, std::size_t m, std::size_t n,
                               double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<Dose> doses;
  doses.reserve(n);
  for (double x : design_points(n)) {
    Dose dose{x, {}};
    dose.responses.resize(m);
    const double mu = model(x);
    for (auto& y : dose.responses) y = mu + noise(rng);
    doses.push_back(std::move(dose));
  }
  return DoseResponseData(std::move(doses));
}

ReplicateEstimate run_estimator(EstimatorKind kind, const DoseResponseData& data, double sigma,
                                double tau0, const std::optional<VarianceModel>& variance) {
  const VarianceModel known = variance.value_or(VarianceModel::known(sigma));
  const VarianceModel estimated = variance.value_or(VarianceModel::pooled());
  switch (kind) {
    case EstimatorKind::stump:
      return {estimate_known_tau(data, tau0, known).d_hat, std::nullopt};
    case EstimatorKind::stump3: {
      const auto z = pvalues_for_null(data, tau0, known);
      return {fit_stump_adaptive(z).d_hat, std::nullopt};
    }
    case EstimatorKind::sigmoid: {
      const auto z = pvalues_for_null(data, tau0, known);
      return {fit_sigmoid(z).d_hat, std::nullopt};
    }
    case EstimatorKind::method1: {
      const auto est = estimate_method1(data, estimated);
      return {est.d_hat, est.tau_hat};
    }
    case EstimatorKind::method2: {
      const auto est = estimate_method2(data, estimated);
      return {est.d_hat, est.tau_hat};
    }
    case EstimatorKind::kink_p2:
      return {fit_kink_p2(data).d_hat, std::nullopt};
  }
  return {};
}

namespace {

std::string data_key(const SimulationConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s|%zu|%zu|%.17g", c.model.label().c_str(), c.m, c.n, c.sigma);
  return buf;
}

}  // namespace

CellResult run_cell(const SimulationConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t key = stream_key(data_key(config));
  const double d0 = config.model.threshold();
  const double tau0 = config.model.baseline();

  struct Outcome {
    bool ok = false;
    double err_d = 0.0;
    double err_tau = 0.0;
  };
  std::vector<Outcome> outcomes(config.reps);
  parallel_for(
      config.reps,
      [&](std::size_t r) {
        auto rng = make_stream(config.seed, key, r);
        const auto data = simulate_data(config.model, config.m, config.n, config.sigma, rng);
        try {
          const auto est = run_estimator(config.estimator, data, config.sigma, tau0, config.variance);
          Outcome o;
          o.ok = std::isfinite(est.d_hat);
          o.err_d = est.d_hat - d0;
          if (est.tau_hat) o.err_tau = *est.tau_hat - tau0;
          outcomes[r] = o;
        } catch (const Error& e) {
          if (error_category(e.code()) == ErrorCategory::usage) throw;
          outcomes[r] = Outcome{};
        }
      },
      config.workers);

  CellResult cell;
  cell.model = config.model.label();
  cell.m = config.m;
  cell.n = config.n;
  cell.sigma = config.sigma;
  cell.estimator = config.estimator;
  cell.reps = config.reps;
  cell.seed = config.seed;

  double sum_d = 0.0;
  double sum_tau = 0.0;
  std::size_t used = 0;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++cell.failures;
      continue;
    }
    sum_d += o.err_d * o.err_d;
    sum_tau += o.err_tau * o.err_tau;
    ++used;
  }
  // Exclusion is tolerated only below 0.1% of the replicates.
  cell.failed = cell.failures > 0 && (used == 0 || cell.failures * 1000 >= config.reps);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  cell.rmse_d = cell.failed ? nan : std::sqrt(sum_d / static_cast<double>(used));
  if (estimates_tau(config.estimator)) {
    cell.rmse_tau = cell.failed ? nan : std::sqrt(sum_tau / static_cast<double>(used));
  }
  cell.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

std::vector<Allocation> allocation_candidates(std::size_t budget, std::size_t slack, std::size_t min_n) {
  if (budget < 4) throw Error(ErrorCode::invalid_config, "budget must be at least 4");
  std::vector<Allocation> out;
  for (std::size_t m = 1; m <= budget; ++m) {
    for (std::size_t n = std::max<std::size_t>(min_n, 1); m * n <= budget; ++n) {
      const std::size_t lower = std::min(m, n) + slack;
      if (budget < lower || m * n > budget - lower) out.push_back({m, n});
    }
  }
  return out;
}

AllocationResult allocation_sweep(const AllocationConfig& config) {
  AllocationResult result;
  for (const auto& a : allocation_candidates(config.budget, config.slack)) {
    SimulationConfig cell;
    cell.model = config.model;
    cell.m = a.m;
    cell.n = a.n;
    cell.sigma = config.sigma;
    cell.estimator = config.estimator;
    cell.reps = config.reps;
    cell.seed = config.seed;
    cell.variance = config.variance;
    cell.workers = config.workers;
    result.cells.push_back(run_cell(cell));
    const auto& c = result.cells.back();
    if (c.failed) continue;
    if (!result.best || c.rmse_d < result.cells[*result.best].rmse_d) {
      result.best = result.cells.size() - 1;
    }
  }
  return result;
}

}  // namespace pvthresh
