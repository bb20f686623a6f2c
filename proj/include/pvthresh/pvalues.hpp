#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pvthresh/dose_data.hpp"

namespace pvthresh {

enum class PValueMethod {
  known_sigma,
  pooled,
  per_dose,
  t_pooled,
  t_per_dose,
  binom_normal,
  binom_exact,
  composite,
  user,
};

std::string_view method_name(PValueMethod method);

struct PValuePoint {
  double x = 0.0;
  double z = 0.0;
};

// Per-dose p-values ordered by covariate. The constructor sorts the points,
// rejects repeated covariates and p-values outside [0,1].
class PValueSeries {
 public:
  PValueSeries() = default;
  explicit PValueSeries(std::vector<PValuePoint> points,
                        PValueMethod method = PValueMethod::user,
                        std::vector<std::size_t> replicates = {});

  const std::vector<PValuePoint>& points() const { return points_; }
  const PValuePoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  PValueMethod method() const { return method_; }
  // Replicate count behind each p-value; empty for user-supplied series.
  const std::vector<std::size_t>& replicates() const { return replicates_; }

  std::vector<double> xs() const;
  std::vector<double> zs() const;

 private:
  std::vector<PValuePoint> points_;
  PValueMethod method_ = PValueMethod::user;
  std::vector<std::size_t> replicates_;
};

enum class VarianceKind { known, pooled, per_dose };

std::string_view variance_name(VarianceKind kind);

struct VarianceModel {
  VarianceKind kind = VarianceKind::pooled;
  double sigma0 = 0.0;  // only meaningful for VarianceKind::known

  static VarianceModel known(double sigma0);
  static VarianceModel pooled() { return {VarianceKind::pooled, 0.0}; }
  static VarianceModel per_dose() { return {VarianceKind::per_dose, 0.0}; }
};

// Reference distribution of the standardized statistic.
enum class NullDistribution { normal, t };

// Storage clamp applied to every computed p-value.
inline constexpr double kMinPValue = 1e-300;
inline constexpr double kMaxPValue = 1.0 - 1e-16;
double clamp_pvalue(double z);

// sqrt( sum_ij (Y_ij - Ybar_i)^2 / (N - n) ); needs a balanced design with m >= 2.
double pooled_sigma(const DoseResponseData& data);
// sqrt( sum_j (Y_ij - Ybar_i)^2 / (m_i - 1) ) for every dose.
std::vector<double> per_dose_sigma(const DoseResponseData& data);

PValueSeries pvalues_known_sigma(const DoseResponseData& data, double tau0, double sigma0);
PValueSeries pvalues_pooled(const DoseResponseData& data, double tau0, bool use_t);
PValueSeries pvalues_per_dose(const DoseResponseData& data, double tau0, bool use_t);

// Test of mu(x) < zeta0 against mu(x) > zeta0; fit the result with levels (1, 0).
PValueSeries pvalues_composite(const DoseResponseData& data, double zeta0,
                               const VarianceModel& variance,
                               NullDistribution dist = NullDistribution::normal);

// Simple-null p-values for any variance treatment.
PValueSeries pvalues_for_null(const DoseResponseData& data, double null_value,
                              const VarianceModel& variance,
                              NullDistribution dist = NullDistribution::normal);

// Plug-in p-values with a separate null value per dose (running-mean method).
PValueSeries pvalues_for_nulls(const DoseResponseData& data, std::span<const double> nulls,
                               const VarianceModel& variance,
                               NullDistribution dist = NullDistribution::normal);

struct BinomialCount {
  double x = 0.0;
  long successes = 0;
  long trials = 0;
};

// Binomial p-values against baseline rate p0, either by the normal
// approximation or by the exact strict exceedance P(Y > y).
PValueSeries pvalues_binomial(std::span<const BinomialCount> counts, double p0, bool exact);

struct SuccessCount {
  double x = 0.0;
  long successes = 0;
};
PValueSeries pvalues_binomial(std::span<const SuccessCount> counts, long m, double p0, bool exact);

}  // namespace pvthresh
