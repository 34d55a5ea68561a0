#pragma once

#include <cstdint>

namespace minty {

/// Selects between the OpenMP kernel and the serial reference path.
/// Both produce bit-identical results; the serial path exists for testing
/// and benchmarking.
enum class Exec { serial, parallel };

/// Derives an independent stream seed for batch/column/replicate `index`.
/// splitmix64 finalizer over (seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int max_threads() noexcept;

} // namespace minty
