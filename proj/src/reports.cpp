#include "pvthresh/reports.hpp"

#include <charconv>
#include <cmath>

namespace pvthresh {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json cell_json(const CellResult& cell, bool include_wall_time) {
  Json j;
  j["key"] = cell.key();
  j["model"] = cell.model;
  j["m"] = cell.m;
  j["n"] = cell.n;
  j["sigma"] = cell.sigma;
  j["estimator"] = std::string(estimator_name(cell.estimator));
  j["rmse_d"] = number_or_null(cell.rmse_d);
  j["rmse_tau"] = cell.rmse_tau ? number_or_null(*cell.rmse_tau) : Json(nullptr);
  j["reps"] = cell.reps;
  j["failures"] = cell.failures;
  j["failed"] = cell.failed;
  j["seed"] = cell.seed;
  if (include_wall_time) j["wall_seconds"] = cell.wall_seconds;
  return j;
}

Json simulation_json(std::span<const CellResult> cells, bool include_wall_time) {
  Json arr = Json::array();
  for (const auto& c : cells) arr.push_back(cell_json(c, include_wall_time));
  Json j;
  j["command"] = "simulate";
  j["cells"] = std::move(arr);
  return j;
}

std::string simulation_csv(std::span<const CellResult> cells, bool include_wall_time) {
  std::string out = "model,m,n,sigma,estimator,rmse_d,rmse_tau,reps,failures,failed,seed";
  out += include_wall_time ? ",wall_seconds\n" : "\n";
  for (const auto& c : cells) {
    out += c.model + ',' + std::to_string(c.m) + ',' + std::to_string(c.n) + ',' +
           format_double(c.sigma) + ',' + std::string(estimator_name(c.estimator)) + ',' +
           format_double(c.rmse_d) + ',' + (c.rmse_tau ? format_double(*c.rmse_tau) : "") + ',' +
           std::to_string(c.reps) + ',' + std::to_string(c.failures) + ',' +
           (c.failed ? "true" : "false") + ',' + std::to_string(c.seed);
    if (include_wall_time) out += ',' + format_double(c.wall_seconds);
    out += '\n';
  }
  return out;
}

Json allocation_json(const AllocationResult& result, std::size_t budget, bool include_wall_time) {
  Json j;
  j["command"] = "allocate";
  j["budget"] = budget;
  Json arr = Json::array();
  for (const auto& c : result.cells) arr.push_back(cell_json(c, include_wall_time));
  j["cells"] = std::move(arr);
  if (result.best) {
    const auto& b = result.cells[*result.best];
    j["best"] = Json{{"m", b.m}, {"n", b.n}, {"rmse_d", number_or_null(b.rmse_d)}};
  } else {
    j["best"] = nullptr;
  }
  return j;
}

Json ci_json(const ConfidenceInterval& ci) {
  Json j;
  j["variant"] = std::string(variant_name(ci.variant));
  j["d_hat"] = ci.d_hat;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["m_n"] = ci.block_size;
  j["B"] = ci.iterations;
  j["level"] = ci.level;
  j["seed"] = ci.seed;
  j["q_lo"] = ci.q_lo;
  j["q_hi"] = ci.q_hi;
  j["tau_hat"] = ci.tau_hat ? Json(*ci.tau_hat) : Json(nullptr);
  j["heuristic"] = ci.heuristic;
  j["redraws"] = ci.redraws;
  return j;
}

std::string ci_csv(std::span<const ConfidenceInterval> intervals) {
  std::string out = "variant,d_hat,lower,upper,q_lo,q_hi,m_n,B,level,seed\n";
  for (const auto& ci : intervals) {
    out += std::string(variant_name(ci.variant)) + ',' + format_double(ci.d_hat) + ',' +
           format_double(ci.lower) + ',' + format_double(ci.upper) + ',' + format_double(ci.q_lo) +
           ',' + format_double(ci.q_hi) + ',' + std::to_string(ci.block_size) + ',' +
           std::to_string(ci.iterations) + ',' + format_double(ci.level) + ',' +
           std::to_string(ci.seed) + '\n';
  }
  return out;
}

}  // namespace pvthresh
