#pragma once

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace wntest {

/// Engine used by every simulation in the library.
using Engine = boost::random::mt19937_64;

/// Identifier recorded in table and report metadata. Bit reproducibility is
/// guaranteed for a fixed identifier (engine, normal sampler, seed scheme).
inline constexpr std::string_view kGeneratorId =
    "boost-mt19937_64/ziggurat-normal/splitmix64-derive";

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replication `index` of a run started from `base`. For a fixed
/// base the map index -> seed is injective over all 64-bit indices, since it
/// is a bijection applied to (mix(base) + index).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base) + index);
}

inline Engine make_engine(std::uint64_t base, std::uint64_t index) {
    return Engine(derive_seed(base, index));
}

using NormalDist = boost::random::normal_distribution<double>;

}  // namespace wntest
