#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pvthresh/baseline.hpp"
#include "pvthresh/dose_data.hpp"
#include "pvthresh/pvalues.hpp"

namespace pvthresh {

// v1a: Method 1 with tau fixed at the full-sample estimate.
// v1b: Method 1 with tau re-estimated on each subsample.
// v2: Method 2.
enum class SubsampleVariant { v1a, v1b, v2 };

std::string_view variant_name(SubsampleVariant variant);
// Accepts "1a", "1b", "2". Throws invalid_config.
SubsampleVariant variant_from_name(std::string_view name);

struct SubsampleConfig {
  std::size_t block_size = 0;  // m_n doses per subsample
  std::size_t iterations = 1000;
  SubsampleVariant variant = SubsampleVariant::v1a;
  double level = 0.95;
  std::uint64_t seed = 1;
  // When set, Method 1 variants use this baseline instead of estimating it.
  std::optional<double> known_tau;
  TauSearch tau_search;
  std::size_t workers = 0;

  // Throws invalid_config; n is the number of doses in the data.
  void validate(std::size_t n) const;
};

struct ConfidenceInterval {
  SubsampleVariant variant = SubsampleVariant::v1a;
  double lower = 0.0;
  double upper = 0.0;
  double q_lo = 0.0;
  double q_hi = 0.0;
  double d_hat = 0.0;
  std::optional<double> tau_hat;
  // Method 2 intervals lack a rate result and are marked heuristic.
  bool heuristic = false;
  std::size_t block_size = 0;
  std::size_t iterations = 0;
  double level = 0.95;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;  // failed subsamples that were replaced
  // t* = m_n^{1/3} (d* - d_hat), in iteration order.
  std::vector<double> statistics;
};

// Ceiling-rank empirical quantile: the ceil(p*B)-th order statistic
// (rank clamped to [1, B]). `sorted` must be ascending and nonempty.
double type1_quantile(std::span<const double> sorted, double p);

// [d_hat - n^{-1/3} q_hi, d_hat - n^{-1/3} q_lo].
std::pair<double, double> interval_from_quantiles(double d_hat, std::size_t n, double q_lo, double q_hi);

// Quantiles of the statistics at (1-level)/2 and 1-(1-level)/2, then the
// rescaled interval.
ConfidenceInterval interval_from_statistics(double d_hat, std::size_t n, double level,
                                            std::vector<double> statistics);

ConfidenceInterval subsample_ci(const DoseResponseData& data, const SubsampleConfig& config,
                                const VarianceModel& variance,
                                NullDistribution dist = NullDistribution::normal);

}  // namespace pvthresh
