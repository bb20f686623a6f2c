#include "pvthresh/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/golden.hpp"
#include "pvthresh/error.hpp"
#include "pvthresh/special_functions.hpp"

namespace pvthresh {

std::string_view estimate_method_name(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::known_tau: return "known-tau";
    case EstimateMethod::method1: return "method1";
    case EstimateMethod::method2: return "method2";
    case EstimateMethod::composite: return "composite";
    case EstimateMethod::interval: return "interval";
    case EstimateMethod::minmax: return "minmax";
  }
  return "known-tau";
}

namespace {

// Dose means and standardizing factors sqrt(m_i)/sigma_i, fixed across tau.
class TauProblem {
 public:
  TauProblem(const DoseResponseData& data, const VarianceModel& variance, NullDistribution dist)
      : dist_(dist) {
    if (data.empty()) throw Error(ErrorCode::empty_data, "no doses in data");
    means_ = data.means();
    const std::size_t n = data.size();
    scale_.resize(n);
    df_.resize(n);
    switch (variance.kind) {
      case VarianceKind::known:
        if (dist == NullDistribution::t) {
          throw Error(ErrorCode::invalid_argument, "t reference distribution needs an estimated variance");
        }
        for (std::size_t i = 0; i < n; ++i) {
          scale_[i] = std::sqrt(static_cast<double>(data[i].count())) / variance.sigma0;
        }
        break;
      case VarianceKind::pooled: {
        const double sigma = pooled_sigma(data);
        const long df = static_cast<long>(data.total_responses() - n);
        for (std::size_t i = 0; i < n; ++i) {
          scale_[i] = std::sqrt(static_cast<double>(data[i].count())) / sigma;
          df_[i] = df;
        }
        break;
      }
      case VarianceKind::per_dose: {
        const auto sigmas = per_dose_sigma(data);
        for (std::size_t i = 0; i < n; ++i) {
          scale_[i] = std::sqrt(static_cast<double>(data[i].count())) / sigmas[i];
          df_[i] = static_cast<long>(data[i].count()) - 1;
        }
        break;
      }
    }
  }

  double operator()(double tau) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < means_.size(); ++i) {
      const double t = scale_[i] * (means_[i] - tau);
      const double z = dist_ == NullDistribution::t ? student_t_cdf(-t, df_[i]) : std_normal_sf(t);
      const double r = z - 0.5;
      acc += r * r;
    }
    return acc;
  }

  std::pair<double, double> default_range() const {
    const auto [lo, hi] = std::minmax_element(means_.begin(), means_.end());
    return {*lo, *hi};
  }

 private:
  NullDistribution dist_;
  std::vector<double> means_;
  std::vector<double> scale_;
  std::vector<long> df_;
};

std::pair<double, double> resolve_range(const TauSearch& search, const TauProblem& problem) {
  const auto range = search.range ? *search.range : problem.default_range();
  if (!std::isfinite(range.first) || !std::isfinite(range.second) || range.first > range.second) {
    throw Error(ErrorCode::empty_range, "tau search range is empty");
  }
  return range;
}

double minimize_tau(const TauProblem& problem, std::pair<double, double> range, const TauSearch& search) {
  const auto [lo, hi] = range;
  if (lo == hi) return lo;
  if (search.grid_size < 2) throw Error(ErrorCode::invalid_argument, "tau grid needs at least 2 points");
  const std::size_t g = search.grid_size;
  const double step = (hi - lo) / static_cast<double>(g - 1);
  auto node = [&](std::size_t k) { return k + 1 == g ? hi : lo + step * static_cast<double>(k); };

  std::size_t best = 0;
  double best_f = problem(node(0));
  for (std::size_t k = 1; k < g; ++k) {
    const double f = problem(node(k));
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  double tau = node(best);
  if (search.refine) {
    const double a = node(best == 0 ? 0 : best - 1);
    const double b = node(best + 1 < g ? best + 1 : best);
    const auto r = detail::golden_section(problem, a, b, 1e-12, 200, 1e-15);
    if (r.fx < best_f) tau = r.x;
  }
  return tau;
}

std::pair<double, double> negate_range(std::pair<double, double> r) { return {-r.second, -r.first}; }

}  // namespace

double tau_criterion(const DoseResponseData& data, const VarianceModel& variance, double tau,
                     NullDistribution dist) {
  return TauProblem(data, variance, dist)(tau);
}

double estimate_tau_method1(const DoseResponseData& data, const VarianceModel& variance,
                            const TauSearch& search, NullDistribution dist) {
  const TauProblem problem(data, variance, dist);
  return minimize_tau(problem, resolve_range(search, problem), search);
}

ThresholdEstimate estimate_known_tau(const DoseResponseData& data, double tau0,
                                     const VarianceModel& variance, NullDistribution dist) {
  ThresholdEstimate est;
  est.method = EstimateMethod::known_tau;
  est.variance = variance;
  est.tau_hat = tau0;
  est.pvalues = pvalues_for_null(data, tau0, variance, dist);
  const StumpFit fit = fit_stump_fixed(est.pvalues, 0.5, 0.0);
  est.d_hat = fit.d_hat;
  est.criterion = fit.sse;
  return est;
}

ThresholdEstimate estimate_method1_at(const DoseResponseData& data, const VarianceModel& variance,
                                      double tau, NullDistribution dist) {
  ThresholdEstimate est = estimate_known_tau(data, tau, variance, dist);
  est.method = EstimateMethod::method1;
  return est;
}

ThresholdEstimate estimate_method1(const DoseResponseData& data, const VarianceModel& variance,
                                   const TauSearch& search, NullDistribution dist) {
  const TauProblem problem(data, variance, dist);
  const auto range = resolve_range(search, problem);
  const double tau = minimize_tau(problem, range, search);
  ThresholdEstimate est = estimate_method1_at(data, variance, tau, dist);
  est.tau_range = range;
  return est;
}

std::vector<RunningMeanPoint> running_mean(const DoseResponseData& data) {
  if (data.empty()) throw Error(ErrorCode::empty_data, "no doses in data");
  std::vector<RunningMeanPoint> out;
  out.reserve(data.size());
  double sum = 0.0;
  std::size_t count = 0;
  for (const Dose& d : data.doses()) {
    for (double y : d.responses) sum += y;
    count += d.count();
    out.push_back({d.x, sum / static_cast<double>(count)});
  }
  return out;
}

double running_mean_at(const std::vector<RunningMeanPoint>& curve, double d) {
  if (curve.empty()) throw Error(ErrorCode::empty_data, "running mean curve is empty");
  auto it = std::upper_bound(curve.begin(), curve.end(), d,
                             [](double v, const RunningMeanPoint& p) { return v < p.x; });
  if (it == curve.begin()) return curve.front().mean;
  return std::prev(it)->mean;
}

ThresholdEstimate estimate_method2(const DoseResponseData& data, const VarianceModel& variance,
                                   NullDistribution dist) {
  const auto curve = running_mean(data);
  std::vector<double> nulls;
  nulls.reserve(curve.size());
  for (const auto& p : curve) nulls.push_back(p.mean);

  ThresholdEstimate est;
  est.method = EstimateMethod::method2;
  est.variance = variance;
  est.pvalues = pvalues_for_nulls(data, nulls, variance, dist);
  const StumpFit fit = fit_stump_fixed(est.pvalues, 0.5, 0.0);
  est.d_hat = fit.d_hat;
  est.criterion = fit.sse;
  est.tau_hat = running_mean_at(curve, fit.d_hat);
  return est;
}

ThresholdEstimate estimate_composite(const DoseResponseData& data, double zeta0,
                                     const VarianceModel& variance, NullDistribution dist) {
  ThresholdEstimate est;
  est.method = EstimateMethod::composite;
  est.variance = variance;
  est.pvalues = pvalues_composite(data, zeta0, variance, dist);
  const StumpFit fit = fit_stump_fixed(est.pvalues, 1.0, 0.0);
  est.d_hat = fit.d_hat;
  est.criterion = fit.sse;
  return est;
}

RegionEstimate estimate_min_region(const DoseResponseData& data, const VarianceModel& variance,
                                   const TauSearch& search, NullDistribution dist) {
  const TauProblem problem(data, variance, dist);
  RegionEstimate region;
  region.tau_range = resolve_range(search, problem);
  region.level = minimize_tau(problem, region.tau_range, search);
  region.pvalues = pvalues_for_null(data, region.level, variance, dist);
  region.interval = fit_baseline_interval(region.pvalues, 0.5, 0.0);
  return region;
}

MinMaxRegions estimate_minmax_regions(const DoseResponseData& data, const VarianceModel& variance,
                                      const TauSearch& min_search, const TauSearch& max_search,
                                      NullDistribution dist) {
  if (!min_search.range || !max_search.range) {
    throw Error(ErrorCode::overlapping_ranges,
                "minimum and maximum searches need explicit, disjoint tau ranges");
  }
  const auto lo = *min_search.range;
  const auto hi = *max_search.range;
  const bool disjoint = lo.second <= hi.first || hi.second <= lo.first;
  if (!disjoint) {
    throw Error(ErrorCode::overlapping_ranges, "minimum and maximum tau ranges overlap");
  }

  MinMaxRegions out;
  out.min = estimate_min_region(data, variance, min_search, dist);

  TauSearch flipped = max_search;
  flipped.range = negate_range(hi);
  out.max = estimate_min_region(data.negated(), variance, flipped, dist);
  out.max.level = -out.max.level;
  out.max.tau_range = hi;
  return out;
}

}  // namespace pvthresh
