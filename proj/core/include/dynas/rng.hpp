#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dynas {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; stable across platforms and standard libraries.
std::uint64_t mix64(std::uint64_t x);

/// Folds `value` into `seed`. Chains of calls give the per-cell seeds used
/// throughout the harness.
std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t seed_combine(std::uint64_t seed, std::string_view tag);

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t seed, const Parts&... parts) {
    ((seed = seed_combine(seed, parts)), ...);
    return seed;
}

}  // namespace dynas
