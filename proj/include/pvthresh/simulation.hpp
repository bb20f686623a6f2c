#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pvthresh/dose_data.hpp"
#include "pvthresh/models.hpp"
#include "pvthresh/pvalues.hpp"

namespace pvthresh {

// stump: (1/2, 0) stump, tau known. stump3: adaptive three-parameter stump.
// sigmoid: two-parameter sigmoid. method1/method2: unknown baseline.
// kink_p2: hockey-stick least squares on the raw responses.
enum class EstimatorKind { stump, stump3, sigmoid, method1, method2, kink_p2 };

std::string_view estimator_name(EstimatorKind kind);
// Throws invalid_config for unknown names.
EstimatorKind estimator_from_name(std::string_view name);
// True for estimators that also produce a baseline estimate.
bool estimates_tau(EstimatorKind kind);

struct SimulationConfig {
  RegressionModel model{ModelName::M0};
  std::size_t m = 10;
  std::size_t n = 50;
  double sigma = 0.1;
  EstimatorKind estimator = EstimatorKind::stump;
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  // Unset: known sigma for the tau-known estimators, pooled otherwise.
  std::optional<VarianceModel> variance;
  std::size_t workers = 0;

  // Throws invalid_config.
  void validate() const;
};

struct CellResult {
  std::string model;
  std::size_t m = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  EstimatorKind estimator = EstimatorKind::stump;
  double rmse_d = 0.0;
  std::optional<double> rmse_tau;
  std::size_t reps = 0;
  std::size_t failures = 0;
  // Set when failures reach 0.1% of the replicates; RMSEs are then NaN.
  bool failed = false;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  // Unique key "(model, m, n, sigma, estimator)".
  std::string key() const;
};

// x_i = i / (n + 1), i = 1..n.
std::vector<double> design_points(std::size_t n);

// Draws Y_ij = mu(x_i) + N(0, sigma^2) on the uniform design.
DoseResponseData simulate_data(const RegressionModel& model, std::size_t m, std::size_t n,
                               double sigma, std::mt19937_64& rng);

struct ReplicateEstimate {
  double d_hat = 0.0;
  std::optional<double> tau_hat;
};

// One estimator run on one data set. sigma is the true noise level, used by
// the known-variance default.
ReplicateEstimate run_estimator(EstimatorKind kind, const DoseResponseData& data, double sigma,
                                double tau0, const std::optional<VarianceModel>& variance);

// Replicate r draws its data from the stream (seed, data key, r); the data
// key omits the estimator so every estimator sees the same replicates.
CellResult run_cell(const SimulationConfig& config);

struct Allocation {
  std::size_t m = 0;
  std::size_t n = 0;
};

// Every (m, n) with m*n <= N, m*n > N - min(m, n) - slack, n >= min_n, m >= 1,
// ordered by increasing m.
std::vector<Allocation> allocation_candidates(std::size_t budget, std::size_t slack = 1,
                                              std::size_t min_n = 3);

struct AllocationResult {
  std::vector<CellResult> cells;
  // Index of the smallest RMSE among the cells that did not fail.
  std::optional<std::size_t> best;
};

struct AllocationConfig {
  RegressionModel model{ModelName::M1};
  double sigma = 0.1;
  std::size_t budget = 100;
  EstimatorKind estimator = EstimatorKind::method1;
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  std::size_t slack = 1;
  std::optional<VarianceModel> variance;
  std::size_t workers = 0;
};

AllocationResult allocation_sweep(const AllocationConfig& config);

}  // namespace pvthresh
