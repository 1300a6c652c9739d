#pragma once

#include <cstdint>
#include <limits>

namespace plan {

using StateId = std::uint32_t;

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Packs a directed edge into a single hashable key.
inline std::uint64_t edgeKey(StateId s, StateId t) {
    return (static_cast<std::uint64_t>(s) << 32) | t;
}

/// Orientation-independent key for undirected bookkeeping (whitelist, cost cache).
inline std::uint64_t undirectedKey(StateId a, StateId b) {
    return a < b ? edgeKey(a, b) : edgeKey(b, a);
}

}  // namespace plan
