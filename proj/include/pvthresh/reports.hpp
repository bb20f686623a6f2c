#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "pvthresh/simulation.hpp"
#include "pvthresh/subsampling.hpp"

namespace pvthresh {

using Json = nlohmann::ordered_json;

// Wall time is left out unless requested so that reruns compare byte-equal.
Json cell_json(const CellResult& cell, bool include_wall_time = false);
Json simulation_json(std::span<const CellResult> cells, bool include_wall_time = false);
// One row per cell: model,m,n,sigma,estimator,rmse_d,rmse_tau,reps,failures,failed,seed.
std::string simulation_csv(std::span<const CellResult> cells, bool include_wall_time = false);

Json allocation_json(const AllocationResult& result, std::size_t budget, bool include_wall_time = false);

Json ci_json(const ConfidenceInterval& ci);
// One row per interval: variant,d_hat,lower,upper,q_lo,q_hi,m_n,B,level,seed.
std::string ci_csv(std::span<const ConfidenceInterval> intervals);

// Shortest round-trip text for a double; "nan"/"inf" for non-finite values.
std::string format_double(double v);

}  // namespace pvthresh
