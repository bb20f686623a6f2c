#include "pvthresh/kink.hpp"

#include <algorithm>
#include <cmath>

#include "detail/golden.hpp"
#include "pvthresh/error.hpp"

namespace pvthresh {

double kink_profile(const DoseResponseData& data, double d, double* slope) {
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& dose : data.doses()) {
    const double u = std::max(dose.x - d, 0.0);
    double sum_y = 0.0;
    for (double y : dose.responses) {
      sum_y += y;
      syy += y * y;
    }
    sxy += u * sum_y;
    sxx += static_cast<double>(dose.count()) * u * u;
  }
  const double beta = sxx > 0.0 ? std::max(sxy / sxx, 0.0) : 0.0;
  if (slope) *slope = beta;
  // sum (y - beta u)^2 expanded; clamp the rounding residue at zero.
  return std::max(syy - 2.0 * beta * sxy + beta * beta * sxx, 0.0);
}

KinkFit fit_kink_p2(const DoseResponseData& data) {
  if (data.empty()) throw Error(ErrorCode::empty_data, "no doses in data");
  const double max_x = data.doses().back().x;
  if (!(max_x > 0.0)) {
    KinkFit fit;
    fit.d_hat = max_x;
    fit.sse = kink_profile(data, max_x);
    return fit;
  }

  const std::size_t steps = 4 * data.size();
  std::size_t best_k = 0;
  double best = kink_profile(data, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double v = kink_profile(data, static_cast<double>(k) / static_cast<double>(steps));
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  double d_hat = static_cast<double>(best_k) / static_cast<double>(steps);

  const double lo = static_cast<double>(best_k == 0 ? 0 : best_k - 1) / static_cast<double>(steps);
  const double hi = static_cast<double>(std::min(best_k + 1, steps)) / static_cast<double>(steps);
  const auto refined = detail::golden_section([&](double d) { return kink_profile(data, d); }, lo, hi);
  if (refined.fx < best) {
    best = refined.fx;
    d_hat = refined.x;
  }

  KinkFit fit;
  fit.d_hat = d_hat;
  fit.sse = kink_profile(data, d_hat, &fit.slope);
  return fit;
}

}  // namespace pvthresh
