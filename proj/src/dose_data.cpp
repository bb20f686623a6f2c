#include "pvthresh/dose_data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvthresh/error.hpp"

namespace pvthresh {

double Dose::mean() const {
  double s = 0.0;
  for (double y : responses) s += y;
  return s / static_cast<double>(responses.size());
}

DoseResponseData::DoseResponseData(std::vector<Dose> doses) {
  for (const Dose& d : doses) {
    if (!std::isfinite(d.x) || d.x < 0.0 || d.x > 1.0) {
      throw Error(ErrorCode::domain_error,
                  "covariate must lie in [0,1], got " + std::to_string(d.x));
    }
    if (d.responses.empty()) {
      throw Error(ErrorCode::empty_data, "dose at x=" + std::to_string(d.x) + " has no responses");
    }
    for (double y : d.responses) {
      if (!std::isfinite(y)) throw Error(ErrorCode::non_numeric, "non-finite response value");
    }
  }
  std::stable_sort(doses.begin(), doses.end(),
                   [](const Dose& a, const Dose& b) { return a.x < b.x; });
  for (Dose& d : doses) {
    if (!doses_.empty() && doses_.back().x == d.x) {
      auto& dst = doses_.back().responses;
      dst.insert(dst.end(), d.responses.begin(), d.responses.end());
    } else {
      doses_.push_back(std::move(d));
    }
  }
}

DoseResponseData DoseResponseData::from_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::invalid_argument, "covariate and response arrays differ in length");
  }
  std::vector<Dose> doses;
  doses.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) doses.push_back(Dose{x[i], {y[i]}});
  return DoseResponseData(std::move(doses));
}

bool DoseResponseData::balanced() const {
  return std::all_of(doses_.begin(), doses_.end(),
                     [&](const Dose& d) { return d.count() == doses_.front().count(); });
}

std::size_t DoseResponseData::total_responses() const {
  std::size_t total = 0;
  for (const Dose& d : doses_) total += d.count();
  return total;
}

std::vector<double> DoseResponseData::covariates() const {
  std::vector<double> out;
  out.reserve(doses_.size());
  for (const Dose& d : doses_) out.push_back(d.x);
  return out;
}

std::vector<double> DoseResponseData::means() const {
  std::vector<double> out;
  out.reserve(doses_.size());
  for (const Dose& d : doses_) out.push_back(d.mean());
  return out;
}

DoseResponseData DoseResponseData::negated() const {
  DoseResponseData out = *this;
  for (Dose& d : out.doses_) {
    for (double& y : d.responses) y = -y;
  }
  return out;
}

DoseResponseData DoseResponseData::subset(std::span<const std::size_t> indices) const {
  std::vector<Dose> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= doses_.size()) throw Error(ErrorCode::invalid_argument, "dose index out of range");
    picked.push_back(doses_[i]);
  }
  return DoseResponseData(std::move(picked));
}

}  // namespace pvthresh
