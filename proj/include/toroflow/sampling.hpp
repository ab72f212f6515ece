#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "toroflow/chart.hpp"

namespace toroflow {

/// SplitMix64 finalizer; counter-based so every (seed, index, stream) triple
/// yields the same value on every run and worker count.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0, 1) derived from (seed, index, stream).
double sample_u01(std::uint64_t seed, std::uint64_t index,
                  std::uint64_t stream);

/// Worker count: TOROFLOW_WORKERS when set (>= 1), otherwise hardware
/// concurrency.  Read on every call so tests can vary it.
std::size_t worker_count();

/// Chunked parallel loop over [0, n).  Each index must write only its own
/// slots; chunking never changes per-index work, so results are identical
/// for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Deterministic pairwise summation (fixed recursion over index ranges).
double pairwise_sum(std::span<const double> v);

/// Rejection-sample coordinates in the shell whose Jacobian clearance is at
/// least `margin` and which pass the coordinate-side domain predicate.
/// Deterministic in (seed, index); throws when a slot exhausts its attempts.
std::vector<Coords> sample_shell(const ChartFamily& chart,
                                 const DomainSpec& dom, std::size_t n,
                                 std::uint64_t seed, double margin = 0.02);

/// Same, restricted to a single psi level set.
std::vector<Coords> sample_level_set(const ChartFamily& chart, double psi,
                                     std::size_t n, std::uint64_t seed,
                                     double margin = 0.0);

}  // namespace toroflow
