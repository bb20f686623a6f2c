#include "pvthresh/subsampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pvthresh/error.hpp"
#include "pvthresh/parallel.hpp"

namespace pvthresh {

std::string_view variant_name(SubsampleVariant variant) {
  switch (variant) {
    case SubsampleVariant::v1a: return "1a";
    case SubsampleVariant::v1b: return "1b";
    case SubsampleVariant::v2: return "2";
  }
  return "1a";
}

SubsampleVariant variant_from_name(std::string_view name) {
  if (name == "1a") return SubsampleVariant::v1a;
  if (name == "1b") return SubsampleVariant::v1b;
  if (name == "2") return SubsampleVariant::v2;
  throw Error(ErrorCode::invalid_config, "unknown subsampling variant '" + std::string(name) + "'");
}

void SubsampleConfig::validate(std::size_t n) const {
  if (block_size < 2) throw Error(ErrorCode::invalid_config, "block size must be at least 2");
  if (block_size >= n) {
    throw Error(ErrorCode::invalid_config, "block size must be smaller than the number of doses");
  }
  if (iterations < 100) throw Error(ErrorCode::invalid_config, "at least 100 iterations are required");
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::invalid_config, "confidence level must lie in (0,1)");
  }
}

double type1_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::empty_data, "no statistics to take quantiles of");
  const double b = static_cast<double>(sorted.size());
  // The offset absorbs rounding in p*B, e.g. 0.025*1000 evaluating above 25.
  double rank = std::ceil(p * b - 1e-9);
  rank = std::clamp(rank, 1.0, b);
  return sorted[static_cast<std::size_t>(rank) - 1];
}

std::pair<double, double> interval_from_quantiles(double d_hat, std::size_t n, double q_lo, double q_hi) {
  const double scale = std::cbrt(static_cast<double>(n));
  return {d_hat - q_hi / scale, d_hat - q_lo / scale};
}

ConfidenceInterval interval_from_statistics(double d_hat, std::size_t n, double level,
                                            std::vector<double> statistics) {
  ConfidenceInterval ci;
  ci.d_hat = d_hat;
  ci.level = level;
  ci.iterations = statistics.size();
  std::vector<double> sorted = statistics;
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - level) / 2.0;
  ci.q_lo = type1_quantile(sorted, tail);
  ci.q_hi = type1_quantile(sorted, 1.0 - tail);
  std::tie(ci.lower, ci.upper) = interval_from_quantiles(d_hat, n, ci.q_lo, ci.q_hi);
  ci.statistics = std::move(statistics);
  return ci;
}

namespace {

struct FullFit {
  double d_hat;
  std::optional<double> tau_hat;
};

FullFit full_sample_fit(const DoseResponseData& data, const SubsampleConfig& config,
                        const VarianceModel& variance, NullDistribution dist) {
  if (config.variant == SubsampleVariant::v2) {
    const auto est = estimate_method2(data, variance, dist);
    return {est.d_hat, est.tau_hat};
  }
  if (config.known_tau) {
    const auto est = estimate_method1_at(data, variance, *config.known_tau, dist);
    return {est.d_hat, *config.known_tau};
  }
  const auto est = estimate_method1(data, variance, config.tau_search, dist);
  return {est.d_hat, est.tau_hat};
}

double subsample_fit(const DoseResponseData& sub, const SubsampleConfig& config, const FullFit& full,
                     const VarianceModel& variance, NullDistribution dist) {
  switch (config.variant) {
    case SubsampleVariant::v1a:
      return estimate_method1_at(sub, variance, *full.tau_hat, dist).d_hat;
    case SubsampleVariant::v1b:
      if (config.known_tau) return estimate_method1_at(sub, variance, *config.known_tau, dist).d_hat;
      return estimate_method1(sub, variance, config.tau_search, dist).d_hat;
    case SubsampleVariant::v2:
      return estimate_method2(sub, variance, dist).d_hat;
  }
  return full.d_hat;
}

}  // namespace

ConfidenceInterval subsample_ci(const DoseResponseData& data, const SubsampleConfig& config,
                                const VarianceModel& variance, NullDistribution dist) {
  if (data.empty()) throw Error(ErrorCode::empty_data, "no doses in data");
  config.validate(data.size());
  const FullFit full = full_sample_fit(data, config, variance, dist);
  if (!full.tau_hat) {
    throw Error(ErrorCode::estimation_failure, "full-sample fit produced no baseline estimate");
  }

  const std::size_t n = data.size();
  const std::size_t budget = config.iterations / 20;  // 5% of B
  const double rate = std::cbrt(static_cast<double>(config.block_size));
  // Variants share the stream key, so 1a and 1b draw identical subsamples.
  const std::uint64_t key = stream_key("subsample");

  std::vector<double> stats(config.iterations);
  std::vector<std::size_t> failures(config.iterations, 0);
  parallel_for(
      config.iterations,
      [&](std::size_t b) {
        auto rng = make_stream(config.seed, key, b);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (;;) {
          // Partial Fisher-Yates: the first block_size entries form the draw.
          for (std::size_t k = 0; k < config.block_size; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, n - 1);
            std::swap(idx[k], idx[pick(rng)]);
          }
          const auto sub = data.subset(std::span<const std::size_t>(idx.data(), config.block_size));
          try {
            stats[b] = rate * (subsample_fit(sub, config, full, variance, dist) - full.d_hat);
            return;
          } catch (const Error& e) {
            if (error_category(e.code()) == ErrorCategory::usage) throw;
            if (++failures[b] > budget) return;
          }
        }
      },
      config.workers);

  const std::size_t total_failures = std::accumulate(failures.begin(), failures.end(), std::size_t{0});
  if (total_failures > budget) {
    throw Error(ErrorCode::subsample_failure,
                std::to_string(total_failures) + " subsample fits failed, above the 5% budget of " +
                    std::to_string(budget));
  }

  ConfidenceInterval ci = interval_from_statistics(full.d_hat, n, config.level, std::move(stats));
  ci.variant = config.variant;
  ci.tau_hat = full.tau_hat;
  ci.heuristic = config.variant == SubsampleVariant::v2;
  ci.block_size = config.block_size;
  ci.seed = config.seed;
  ci.redraws = total_failures;
  return ci;
}

}  // namespace pvthresh
