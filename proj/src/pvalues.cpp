#include "pvthresh/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvthresh/error.hpp"
#include "pvthresh/special_functions.hpp"

namespace pvthresh {

std::string_view method_name(PValueMethod method) {
  switch (method) {
    case PValueMethod::known_sigma: return "known-sigma";
    case PValueMethod::pooled: return "pooled";
    case PValueMethod::per_dose: return "per-dose";
    case PValueMethod::t_pooled: return "t-pooled";
    case PValueMethod::t_per_dose: return "t-per-dose";
    case PValueMethod::binom_normal: return "binom-normal";
    case PValueMethod::binom_exact: return "binom-exact";
    case PValueMethod::composite: return "composite";
    case PValueMethod::user: return "user";
  }
  return "user";
}

std::string_view variance_name(VarianceKind kind) {
  switch (kind) {
    case VarianceKind::known: return "known";
    case VarianceKind::pooled: return "pooled";
    case VarianceKind::per_dose: return "per-dose";
  }
  return "pooled";
}

VarianceModel VarianceModel::known(double sigma0) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw Error(ErrorCode::invalid_argument, "known sigma must be positive and finite");
  }
  return {VarianceKind::known, sigma0};
}

PValueSeries::PValueSeries(std::vector<PValuePoint> points, PValueMethod method,
                           std::vector<std::size_t> replicates)
    : method_(method) {
  if (!replicates.empty() && replicates.size() != points.size()) {
    throw Error(ErrorCode::invalid_argument, "replicate counts must match the number of points");
  }
  for (const PValuePoint& p : points) {
    if (!std::isfinite(p.x)) throw Error(ErrorCode::non_numeric, "non-finite covariate in p-value series");
    if (!(p.z >= 0.0 && p.z <= 1.0)) {
      throw Error(ErrorCode::invalid_probability,
                  "p-value outside [0,1] at x=" + std::to_string(p.x));
    }
  }
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });
  points_.reserve(points.size());
  for (std::size_t i : order) {
    if (!points_.empty() && points_.back().x == points[i].x) {
      throw Error(ErrorCode::invalid_argument,
                  "repeated covariate " + std::to_string(points[i].x) + " in p-value series");
    }
    points_.push_back(points[i]);
    if (!replicates.empty()) replicates_.push_back(replicates[i]);
  }
}

std::vector<double> PValueSeries::xs() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.x);
  return out;
}

std::vector<double> PValueSeries::zs() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.z);
  return out;
}

double clamp_pvalue(double z) { return std::clamp(z, kMinPValue, kMaxPValue); }

namespace {

void require_nonempty(const DoseResponseData& data) {
  if (data.empty()) throw Error(ErrorCode::empty_data, "no doses in data");
}

// Sum of squared deviations from the dose mean, computed on responses
// centered at `null` so a common shift of responses and null is exact.
struct CenteredDose {
  double mean_diff = 0.0;
  double ss = 0.0;
};

CenteredDose center(const Dose& dose, double null) {
  double s = 0.0;
  for (double y : dose.responses) s += y - null;
  const double mean = s / static_cast<double>(dose.count());
  double ss = 0.0;
  for (double y : dose.responses) {
    const double dev = (y - null) - mean;
    ss += dev * dev;
  }
  return {mean, ss};
}

double upper_tail(double t, NullDistribution dist, long df) {
  if (dist == NullDistribution::t) return student_t_cdf(-t, df);
  return std_normal_sf(t);
}

std::string at_dose(double x) { return " at x=" + std::to_string(x); }

PValueMethod tag_for(const VarianceModel& variance, NullDistribution dist) {
  switch (variance.kind) {
    case VarianceKind::known: return PValueMethod::known_sigma;
    case VarianceKind::pooled:
      return dist == NullDistribution::t ? PValueMethod::t_pooled : PValueMethod::pooled;
    case VarianceKind::per_dose:
      return dist == NullDistribution::t ? PValueMethod::t_per_dose : PValueMethod::per_dose;
  }
  return PValueMethod::pooled;
}

PValueSeries build(const DoseResponseData& data, std::span<const double> nulls,
                   const VarianceModel& variance, NullDistribution dist, PValueMethod tag) {
  require_nonempty(data);
  if (nulls.size() != data.size()) {
    throw Error(ErrorCode::invalid_argument, "one null value per dose is required");
  }
  const std::size_t n = data.size();
  std::vector<CenteredDose> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = center(data[i], nulls[i]);

  std::vector<PValuePoint> points(n);
  std::vector<std::size_t> reps(n);
  for (std::size_t i = 0; i < n; ++i) reps[i] = data[i].count();

  switch (variance.kind) {
    case VarianceKind::known: {
      if (!(variance.sigma0 > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "known sigma must be positive");
      }
      if (dist == NullDistribution::t) {
        throw Error(ErrorCode::invalid_argument, "t reference distribution needs an estimated variance");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double t = std::sqrt(static_cast<double>(reps[i])) * centered[i].mean_diff / variance.sigma0;
        points[i] = {data[i].x, clamp_pvalue(std_normal_sf(t))};
      }
      break;
    }
    case VarianceKind::pooled: {
      if (!data.balanced()) {
        throw Error(ErrorCode::unbalanced_design, "pooled variance requires equal replicate counts");
      }
      const std::size_t m = reps.front();
      if (m < 2) throw Error(ErrorCode::too_few_replicates, "pooled variance needs m >= 2");
      double ss = 0.0;
      for (const auto& c : centered) ss += c.ss;
      const long df = static_cast<long>(m * n - n);
      const double sigma = std::sqrt(ss / static_cast<double>(df));
      if (!(sigma > 0.0)) {
        throw Error(ErrorCode::degenerate_variance, "pooled standard deviation is zero");
      }
      const double root_m = std::sqrt(static_cast<double>(m));
      for (std::size_t i = 0; i < n; ++i) {
        const double t = root_m * centered[i].mean_diff / sigma;
        points[i] = {data[i].x, clamp_pvalue(upper_tail(t, dist, df))};
      }
      break;
    }
    case VarianceKind::per_dose: {
      for (std::size_t i = 0; i < n; ++i) {
        if (reps[i] < 2) {
          throw Error(ErrorCode::too_few_replicates, "per-dose variance needs >= 2 replicates" + at_dose(data[i].x));
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const long df = static_cast<long>(reps[i]) - 1;
        const double sigma = std::sqrt(centered[i].ss / static_cast<double>(df));
        if (!(sigma > 0.0)) {
          throw Error(ErrorCode::degenerate_variance, "identical replicates" + at_dose(data[i].x));
        }
        const double t = std::sqrt(static_cast<double>(reps[i])) * centered[i].mean_diff / sigma;
        points[i] = {data[i].x, clamp_pvalue(upper_tail(t, dist, df))};
      }
      break;
    }
  }
  return PValueSeries(std::move(points), tag, std::move(reps));
}

}  // namespace

double pooled_sigma(const DoseResponseData& data) {
  require_nonempty(data);
  if (!data.balanced()) {
    throw Error(ErrorCode::unbalanced_design, "pooled variance requires equal replicate counts");
  }
  const std::size_t m = data[0].count();
  if (m < 2) throw Error(ErrorCode::too_few_replicates, "pooled variance needs m >= 2");
  double ss = 0.0;
  for (const Dose& d : data.doses()) ss += center(d, 0.0).ss;
  const double sigma = std::sqrt(ss / static_cast<double>(m * data.size() - data.size()));
  if (!(sigma > 0.0)) throw Error(ErrorCode::degenerate_variance, "pooled standard deviation is zero");
  return sigma;
}

std::vector<double> per_dose_sigma(const DoseResponseData& data) {
  require_nonempty(data);
  std::vector<double> out;
  out.reserve(data.size());
  for (const Dose& d : data.doses()) {
    if (d.count() < 2) {
      throw Error(ErrorCode::too_few_replicates, "per-dose variance needs >= 2 replicates" + at_dose(d.x));
    }
    const double sigma = std::sqrt(center(d, 0.0).ss / static_cast<double>(d.count() - 1));
    if (!(sigma > 0.0)) throw Error(ErrorCode::degenerate_variance, "identical replicates" + at_dose(d.x));
    out.push_back(sigma);
  }
  return out;
}

PValueSeries pvalues_for_nulls(const DoseResponseData& data, std::span<const double> nulls,
                               const VarianceModel& variance, NullDistribution dist) {
  return build(data, nulls, variance, dist, tag_for(variance, dist));
}

PValueSeries pvalues_for_null(const DoseResponseData& data, double null_value,
                              const VarianceModel& variance, NullDistribution dist) {
  const std::vector<double> nulls(data.size(), null_value);
  return build(data, nulls, variance, dist, tag_for(variance, dist));
}

PValueSeries pvalues_known_sigma(const DoseResponseData& data, double tau0, double sigma0) {
  return pvalues_for_null(data, tau0, VarianceModel::known(sigma0));
}

PValueSeries pvalues_pooled(const DoseResponseData& data, double tau0, bool use_t) {
  return pvalues_for_null(data, tau0, VarianceModel::pooled(),
                          use_t ? NullDistribution::t : NullDistribution::normal);
}

PValueSeries pvalues_per_dose(const DoseResponseData& data, double tau0, bool use_t) {
  return pvalues_for_null(data, tau0, VarianceModel::per_dose(),
                          use_t ? NullDistribution::t : NullDistribution::normal);
}

PValueSeries pvalues_composite(const DoseResponseData& data, double zeta0,
                               const VarianceModel& variance, NullDistribution dist) {
  const std::vector<double> nulls(data.size(), zeta0);
  return build(data, nulls, variance, dist, PValueMethod::composite);
}

PValueSeries pvalues_binomial(std::span<const BinomialCount> counts, double p0, bool exact) {
  if (counts.empty()) throw Error(ErrorCode::empty_data, "no binomial counts");
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw Error(ErrorCode::invalid_probability, "baseline rate p0 must lie strictly inside (0,1)");
  }
  std::vector<BinomialCount> merged(counts.begin(), counts.end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const BinomialCount& a, const BinomialCount& b) { return a.x < b.x; });
  std::vector<BinomialCount> doses;
  for (const BinomialCount& c : merged) {
    if (c.trials < 1 || c.successes < 0 || c.successes > c.trials) {
      throw Error(ErrorCode::invalid_argument,
                  "binomial count needs 0 <= y <= m and m >= 1" + at_dose(c.x));
    }
    if (!doses.empty() && doses.back().x == c.x) {
      doses.back().successes += c.successes;
      doses.back().trials += c.trials;
    } else {
      doses.push_back(c);
    }
  }
  std::vector<PValuePoint> points;
  std::vector<std::size_t> reps;
  for (const BinomialCount& c : doses) {
    double z;
    if (exact) {
      z = binomial_sf(c.successes, c.trials, p0);
    } else {
      const double m = static_cast<double>(c.trials);
      const double score = (static_cast<double>(c.successes) - m * p0) / std::sqrt(m * p0 * (1.0 - p0));
      z = std_normal_sf(score);
    }
    points.push_back({c.x, clamp_pvalue(z)});
    reps.push_back(static_cast<std::size_t>(c.trials));
  }
  return PValueSeries(std::move(points), exact ? PValueMethod::binom_exact : PValueMethod::binom_normal,
                      std::move(reps));
}

PValueSeries pvalues_binomial(std::span<const SuccessCount> counts, long m, double p0, bool exact) {
  std::vector<BinomialCount> full;
  full.reserve(counts.size());
  for (const SuccessCount& c : counts) full.push_back({c.x, c.successes, m});
  return pvalues_binomial(full, p0, exact);
}

}  // namespace pvthresh
