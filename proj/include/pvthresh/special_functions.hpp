#pragma once

// Distribution functions used to turn test statistics into p-values.
// All functions are pure and reentrant.

namespace pvthresh {

// Standard normal CDF, accurate to a few ulps across the whole real line.
double std_normal_cdf(double t);

// Upper tail 1 - Phi(t), computed without cancellation for large t.
double std_normal_sf(double t);

// Student t CDF with integer degrees of freedom (df >= 1), via the
// regularized incomplete beta function. Throws invalid_df for df < 1.
double student_t_cdf(double t, long df);

// P(Y <= y) for Y ~ Binomial(m, p). y < 0 gives 0, y >= m gives 1.
double binomial_cdf(long y, long m, double p);

// P(Y > y), summed from the upper tail so small exceedance probabilities
// keep their relative accuracy.
double binomial_sf(long y, long m, double p);

}  // namespace pvthresh
