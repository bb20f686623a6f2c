#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pvthresh {

enum class ModelName { M0, M1, M2, M3, M4, M5, M1tilde, M2tilde, custom };

// Regression function of the simulation study: zero up to its threshold d0
// and positive beyond it (M4 returns to zero at x = 1).
class RegressionModel {
 public:
  explicit RegressionModel(ModelName name);
  RegressionModel(std::string label, double d0, std::function<double(double)> mu);

  // Accepts "M0".."M5", "M1tilde", "M2tilde" (case-insensitive). Throws invalid_model.
  static RegressionModel from_name(std::string_view name);

  ModelName name() const { return name_; }
  const std::string& label() const { return label_; }
  double threshold() const { return d0_; }
  double baseline() const { return 0.0; }

  // Throws domain_error outside [0,1].
  double operator()(double x) const;

 private:
  ModelName name_;
  std::string label_;
  double d0_;
  std::function<double(double)> custom_;
};

double eval_model(const RegressionModel& model, double x);

// Names of the built-in models, in table order.
std::vector<std::string> builtin_model_names();

}  // namespace pvthresh
