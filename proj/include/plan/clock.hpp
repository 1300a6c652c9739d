#pragma once

#include <cstdint>

namespace plan {

/// Deterministic work-based clock.
///
/// Budgets and event timestamps are expressed in "seconds" of accounted work
/// rather than wall time, so a run is bit-identical for a fixed seed and
/// configuration. One unit corresponds to roughly one state collision check;
/// bulkier operations charge proportionally more.
class WorkClock {
public:
    static constexpr double kUnitsPerSecond = 4.0e6;

    // Charge weights for work that is not itself a state check.
    static constexpr std::uint64_t kPlannerIteration = 16;
    static constexpr std::uint64_t kQuadratureNode = 1;
    static constexpr std::uint64_t kPerSampleIndexing = 24;

    void charge(std::uint64_t units) { units_ += units; }

    std::uint64_t units() const { return units_; }
    double seconds() const { return static_cast<double>(units_) / kUnitsPerSecond; }

    static std::uint64_t unitsForSeconds(double s) {
        return static_cast<std::uint64_t>(s * kUnitsPerSecond);
    }

private:
    std::uint64_t units_ = 0;
};

}  // namespace plan
