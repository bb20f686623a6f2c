#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pvthresh {

// One distinct covariate value with all responses observed there.
struct Dose {
  double x = 0.0;
  std::vector<double> responses;

  std::size_t count() const { return responses.size(); }
  double mean() const;
};

// Replicated dose-response data. Doses are sorted by x, duplicated x values
// are merged into a single dose, and every dose carries at least one
// response. Covariates must lie in [0,1].
class DoseResponseData {
 public:
  DoseResponseData() = default;
  explicit DoseResponseData(std::vector<Dose> doses);

  // Long-format constructor: one (x, y) pair per observation.
  static DoseResponseData from_pairs(std::span<const double> x, std::span<const double> y);

  const std::vector<Dose>& doses() const { return doses_; }
  const Dose& operator[](std::size_t i) const { return doses_[i]; }
  std::size_t size() const { return doses_.size(); }
  bool empty() const { return doses_.empty(); }

  // True when every dose has the same replicate count.
  bool balanced() const;
  std::size_t total_responses() const;
  std::vector<double> covariates() const;
  std::vector<double> means() const;

  // Same design with every response multiplied by -1.
  DoseResponseData negated() const;
  // Doses at the given indices (any order; result is re-sorted).
  DoseResponseData subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Dose> doses_;
};

}  // namespace pvthresh
