#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

namespace pvthresh {

// Effective worker count: `requested` (0 means the hardware concurrency),
// capped by THRESHOLD_PV_THREADS when that is set to a positive integer.
std::size_t resolve_worker_count(std::size_t requested = 0);

// Runs body(i) for i in [0, count) on up to resolve_worker_count(workers)
// threads. The first exception thrown by any body is rethrown after all
// workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

// Stable 64-bit FNV-1a hash for stream keys.
std::uint64_t stream_key(std::string_view text);

// Seed for stream `index` under (master, key); independent of scheduling.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t key, std::uint64_t index);

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t key, std::uint64_t index);

}  // namespace pvthresh
