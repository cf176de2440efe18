#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace lobkit {

/// Run fn(i) for i in [0, count) on up to `threads` worker threads. Work is
/// split into contiguous blocks; fn must only write to per-index state.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Pairwise (tree) summation in a fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values) noexcept;

/// The random engine of path `index` under master `seed`: a 64-bit Mersenne
/// Twister seeded from seed_seq{seed lo, seed hi, index lo, index hi}.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t index);

/// Mean and standard error over independent replications.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

McEstimate summarize(std::span<const double> values);

}  // namespace lobkit
