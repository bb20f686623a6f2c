#pragma once

#include "pvthresh/dose_data.hpp"

namespace pvthresh {

// Hockey-stick fit y = slope * (x - d)_+ with the baseline known to be 0.
struct KinkFit {
  double d_hat = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

// Profile least squares: closed-form slope (clamped at 0) for each d on the
// grid {k / (4n)}, then golden-section refinement around the best node.
KinkFit fit_kink_p2(const DoseResponseData& data);

// Residual sum of squares of the profiled slope at split d; writes the slope.
double kink_profile(const DoseResponseData& data, double d, double* slope = nullptr);

}  // namespace pvthresh
