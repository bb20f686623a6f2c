#include "pvthresh/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

#include "pvthresh/error.hpp"

namespace pvthresh {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Beyond this many trials the pmf summation is replaced by the
// incomplete-beta identity.
constexpr long kDirectSummationLimit = 10000;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_probability,
                "binomial probability must lie in [0,1], got " + std::to_string(p));
  }
}

void check_trials(long m) {
  if (m < 1) {
    throw Error(ErrorCode::invalid_argument, "binomial trial count must be >= 1");
  }
}

double log_binomial_pmf(long k, long m, double log_p, double log_q) {
  const double log_choose = boost::math::lgamma(static_cast<double>(m) + 1.0) -
                            boost::math::lgamma(static_cast<double>(k) + 1.0) -
                            boost::math::lgamma(static_cast<double>(m - k) + 1.0);
  return log_choose + static_cast<double>(k) * log_p + static_cast<double>(m - k) * log_q;
}

// Sum of pmf over [lo, hi]; terms are nonnegative so partial sums are
// monotone in the summation direction.
double sum_pmf(long lo, long hi, long m, double p) {
  if (p == 0.0) return (lo <= 0 && 0 <= hi) ? 1.0 : 0.0;
  if (p == 1.0) return (lo <= m && m <= hi) ? 1.0 : 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double total = 0.0;
  for (long k = lo; k <= hi; ++k) total += std::exp(log_binomial_pmf(k, m, log_p, log_q));
  return total;
}

}  // namespace

double std_normal_cdf(double t) {
  if (std::isnan(t)) return t;
  return 0.5 * std::erfc(-t * kInvSqrt2);
}

double std_normal_sf(double t) {
  if (std::isnan(t)) return t;
  return 0.5 * std::erfc(t * kInvSqrt2);
}

double student_t_cdf(double t, long df) {
  if (df < 1) {
    throw Error(ErrorCode::invalid_df, "t distribution needs df >= 1, got " + std::to_string(df));
  }
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t == 0.0) return 0.5;
  const double nu = static_cast<double>(df);
  // Two-sided tail mass P(|T| > |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
  const double t2 = t * t;
  double tail;
  if (t2 < nu) {
    tail = boost::math::ibetac(0.5, 0.5 * nu, t2 / (nu + t2));
  } else {
    tail = boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + t2));
  }
  const double one_sided = 0.5 * tail;
  return t > 0 ? 1.0 - one_sided : one_sided;
}

double binomial_cdf(long y, long m, double p) {
  check_trials(m);
  check_probability(p);
  if (y < 0) return 0.0;
  if (y >= m) return 1.0;
  if (m > kDirectSummationLimit) {
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    return boost::math::ibeta(static_cast<double>(m - y), static_cast<double>(y) + 1.0, 1.0 - p);
  }
  const double s = sum_pmf(0, y, m, p);
  return s > 1.0 ? 1.0 : s;
}

double binomial_sf(long y, long m, double p) {
  check_trials(m);
  check_probability(p);
  if (y < 0) return 1.0;
  if (y >= m) return 0.0;
  if (m > kDirectSummationLimit) {
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(y) + 1.0, static_cast<double>(m - y), p);
  }
  double total = 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  for (long k = m; k > y; --k) total += std::exp(log_binomial_pmf(k, m, log_p, log_q));
  return total > 1.0 ? 1.0 : total;
}

}  // namespace pvthresh
