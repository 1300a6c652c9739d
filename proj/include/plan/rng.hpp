#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace plan {

/// Seeded random source confined to one planner run.
///
/// Uniform doubles are generated from the top 53 bits of the engine output so
/// the stream is bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in the open interval (0, 1). Exact 0 is redrawn.
    double uniform01() {
        for (;;) {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    /// Uniform in [0, n).
    std::size_t uniformIndex(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    double normal() { return normal_(engine_); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace plan
