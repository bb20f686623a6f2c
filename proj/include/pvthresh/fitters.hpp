#pragma once

#include <cstddef>

#include "pvthresh/pvalues.hpp"

namespace pvthresh {

// Least-squares stump alpha*1(x <= d) + beta*1(x > d) fitted to p-values.
// The criterion is piecewise constant between observed covariates, so the
// split is searched over {0} U {x_1..x_n}; ties go to the smallest split.
struct StumpFit {
  double d_hat = 0.0;
  double left_level = 0.5;
  double right_level = 0.0;
  double sse = 0.0;
  // 0 for the split at d = 0, k for the k-th smallest covariate.
  std::size_t candidate_index = 0;
  // False when the corresponding side of the split holds no points.
  bool left_identified = true;
  bool right_identified = true;
};

// Two-parameter sigmoid working model; 1/2 left of d, logistic decay right of d.
struct SigmoidFit {
  double d_hat = 0.0;
  double steepness = 0.0;
  double sse = 0.0;  // mean squared residual
};

// Baseline interval [a, b] with inside level and outside level.
struct IntervalFit {
  double a_hat = 0.0;
  double b_hat = 0.0;
  bool empty = false;  // true: no point lies inside the fitted interval
  double sse = 0.0;
};

inline constexpr double kMaxSteepness = 1e6;

double stump_criterion(const PValueSeries& series, double d, double left_level, double right_level);
StumpFit fit_stump_fixed(const PValueSeries& series, double left_level, double right_level);
StumpFit fit_stump_adaptive(const PValueSeries& series);

double sigmoid_value(double x, double d, double steepness);
double sigmoid_criterion(const PValueSeries& series, double d, double steepness);
SigmoidFit fit_sigmoid(const PValueSeries& series);

double interval_criterion(const PValueSeries& series, const IntervalFit& interval,
                          double inside_level, double out_level);
IntervalFit fit_baseline_interval(const PValueSeries& series, double inside_level, double out_level);

}  // namespace pvthresh
