#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pvthresh/dose_data.hpp"
#include "pvthresh/fitters.hpp"
#include "pvthresh/pvalues.hpp"

namespace pvthresh {

// Search over candidate baseline values tau. Without an explicit range the
// search spans [min dose mean, max dose mean].
struct TauSearch {
  std::optional<std::pair<double, double>> range;
  std::size_t grid_size = 2001;
  bool refine = true;
};

enum class EstimateMethod { known_tau, method1, method2, composite, interval, minmax };

std::string_view estimate_method_name(EstimateMethod method);

struct ThresholdEstimate {
  double d_hat = 0.0;
  std::optional<double> tau_hat;
  EstimateMethod method = EstimateMethod::known_tau;
  VarianceModel variance;
  double criterion = 0.0;  // stump sse at d_hat
  std::optional<std::pair<double, double>> tau_range;
  PValueSeries pvalues;  // the plug-in p-values the stump was fitted to
};

// Sum over doses of (Z_i(tau) - 1/2)^2, the centering criterion for tau.
double tau_criterion(const DoseResponseData& data, const VarianceModel& variance, double tau,
                     NullDistribution dist = NullDistribution::normal);

// Baseline estimate: minimizer of tau_criterion on a dense grid, refined by
// golden section in the cells adjacent to the best grid node.
double estimate_tau_method1(const DoseResponseData& data, const VarianceModel& variance,
                            const TauSearch& search = {},
                            NullDistribution dist = NullDistribution::normal);

// Known baseline: p-values at tau0 and the (1/2, 0) stump.
ThresholdEstimate estimate_known_tau(const DoseResponseData& data, double tau0,
                                     const VarianceModel& variance,
                                     NullDistribution dist = NullDistribution::normal);

// Two-step estimate: tau from estimate_tau_method1, then the (1/2, 0) stump
// on the plug-in p-values.
ThresholdEstimate estimate_method1(const DoseResponseData& data, const VarianceModel& variance,
                                   const TauSearch& search = {},
                                   NullDistribution dist = NullDistribution::normal);

// Same as estimate_method1 but with a caller-supplied baseline.
ThresholdEstimate estimate_method1_at(const DoseResponseData& data, const VarianceModel& variance,
                                      double tau, NullDistribution dist = NullDistribution::normal);

struct RunningMeanPoint {
  double x = 0.0;
  double mean = 0.0;
};

// Mean of all responses at doses <= x, evaluated at every observed dose.
std::vector<RunningMeanPoint> running_mean(const DoseResponseData& data);

// Step-function lookup of the running mean; splits left of the first dose
// take the first dose's mean.
double running_mean_at(const std::vector<RunningMeanPoint>& curve, double d);

// One-step estimate: each dose is tested against the running mean at that
// dose. Heuristic for non-monotone regression functions.
ThresholdEstimate estimate_method2(const DoseResponseData& data, const VarianceModel& variance,
                                   NullDistribution dist = NullDistribution::normal);

// Composite hypothesis mu(x) < zeta0: (1, 0) stump on the composite p-values.
ThresholdEstimate estimate_composite(const DoseResponseData& data, double zeta0,
                                     const VarianceModel& variance,
                                     NullDistribution dist = NullDistribution::normal);

struct RegionEstimate {
  IntervalFit interval;
  double level = 0.0;  // estimated extremal value of mu on the interval
  std::pair<double, double> tau_range;
  PValueSeries pvalues;
};

struct MinMaxRegions {
  RegionEstimate min;
  RegionEstimate max;
};

// Locates the plateau where mu attains its minimum and the one where it
// attains its maximum. Both searches must carry disjoint tau ranges; the
// maximum is found as the minimum of the sign-flipped data.
MinMaxRegions estimate_minmax_regions(const DoseResponseData& data, const VarianceModel& variance,
                                      const TauSearch& min_search, const TauSearch& max_search,
                                      NullDistribution dist = NullDistribution::normal);

// The minimum-side half of estimate_minmax_regions.
RegionEstimate estimate_min_region(const DoseResponseData& data, const VarianceModel& variance,
                                   const TauSearch& search,
                                   NullDistribution dist = NullDistribution::normal);

}  // namespace pvthresh
