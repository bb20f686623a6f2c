#include "pvthresh/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "pvthresh/error.hpp"

namespace pvthresh {

namespace {

// Decay rate chosen so that M3(1) = 1/2.
const double kM3Rate = 0.5 * std::numbers::ln2;

double threshold_of(ModelName name) {
  switch (name) {
    case ModelName::M1tilde: return 0.2;
    case ModelName::M2tilde: return 0.8;
    default: return 0.5;
  }
}

std::string label_of(ModelName name) {
  switch (name) {
    case ModelName::M0: return "M0";
    case ModelName::M1: return "M1";
    case ModelName::M2: return "M2";
    case ModelName::M3: return "M3";
    case ModelName::M4: return "M4";
    case ModelName::M5: return "M5";
    case ModelName::M1tilde: return "M1tilde";
    case ModelName::M2tilde: return "M2tilde";
    case ModelName::custom: return "custom";
  }
  return "custom";
}

}  // namespace

RegressionModel::RegressionModel(ModelName name)
    : name_(name), label_(label_of(name)), d0_(threshold_of(name)) {
  if (name == ModelName::custom) {
    throw Error(ErrorCode::invalid_model, "custom models need an evaluator");
  }
}

RegressionModel::RegressionModel(std::string label, double d0, std::function<double(double)> mu)
    : name_(ModelName::custom), label_(std::move(label)), d0_(d0), custom_(std::move(mu)) {
  if (!custom_) throw Error(ErrorCode::invalid_model, "custom model has no evaluator");
}

RegressionModel RegressionModel::from_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::pair<const char*, ModelName> table[] = {
      {"m0", ModelName::M0}, {"m1", ModelName::M1}, {"m2", ModelName::M2},
      {"m3", ModelName::M3}, {"m4", ModelName::M4}, {"m5", ModelName::M5},
      {"m1tilde", ModelName::M1tilde}, {"m2tilde", ModelName::M2tilde},
  };
  for (const auto& [k, v] : table) {
    if (key == k) return RegressionModel(v);
  }
  throw Error(ErrorCode::invalid_model, "unknown model '" + std::string(name) + "'");
}

double RegressionModel::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::domain_error, "model evaluated outside [0,1]");
  }
  switch (name_) {
    case ModelName::M0: return x > 0.5 ? 0.5 : 0.0;
    case ModelName::M1: return x > 0.5 ? x - 0.5 : 0.0;
    case ModelName::M2: return x > 0.5 ? 2.0 * (x - 0.5) * (x - 0.5) : 0.0;
    case ModelName::M3: return x > 0.5 ? std::exp(-kM3Rate / (x - 0.5)) : 0.0;
    case ModelName::M4:
      if (x <= 0.5) return 0.0;
      return x <= 0.75 ? x - 0.5 : 1.0 - x;
    case ModelName::M5:
      if (x <= 0.5) return 0.0;
      return x <= 0.8 ? x - 0.5 : 0.3 - (x - 0.8);
    case ModelName::M1tilde: return x > 0.2 ? x - 0.2 : 0.0;
    case ModelName::M2tilde: return x > 0.8 ? x - 0.8 : 0.0;
    case ModelName::custom: return custom_(x);
  }
  return 0.0;
}

double eval_model(const RegressionModel& model, double x) { return model(x); }

std::vector<std::string> builtin_model_names() {
  return {"M0", "M1", "M2", "M3", "M4", "M5", "M1tilde", "M2tilde"};
}

}  // namespace pvthresh
