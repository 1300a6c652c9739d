#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plan/clock.hpp"
#include "plan/space.hpp"
#include "plan/types.hpp"

namespace plan {

/// Axis-aligned hyperbox obstacle, treated as a closed set: states on the
/// boundary are invalid.
struct Obstacle {
    std::vector<double> lower;
    std::vector<double> upper;

    bool contains(const std::vector<double>& x) const;

    /// Euclidean distance from x to the closed box, 0 if inside.
    double distanceTo(const std::vector<double>& x) const;
};

/// Per-trial collision counters. The clock is charged one unit per state
/// check so collision work drives the deterministic budget.
struct CollisionCounters {
    std::uint64_t stateChecks = 0;
    std::uint64_t denseEdgeChecks = 0;
    std::uint64_t sparseEdgeChecks = 0;
    std::uint64_t trueCostEvaluations = 0;
};

struct CollisionContext {
    CollisionCounters counters;
    WorkClock clock;
};

/// Immutable obstacle world over the unit hypercube. Safe to share across
/// parallel trials; counters live in the per-trial CollisionContext.
class World {
public:
    World(unsigned dimension, std::vector<Obstacle> obstacles, double cdResolution);

    unsigned dimension() const { return dimension_; }
    double cdResolution() const { return cdResolution_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }

    bool isValidState(const std::vector<double>& x, CollisionContext& ctx) const;
    bool isValidState(const State& x, CollisionContext& ctx) const {
        return isValidState(x.coords, ctx);
    }

    /// Minimum distance to any obstacle; +inf when there are no obstacles.
    /// Charges the clock like a state check but does not count as one.
    double clearance(const std::vector<double>& x, CollisionContext& ctx) const;

    /// Dense edge validation at spacing <= cdResolution, endpoints included.
    /// Walks from both endpoints inward.
    bool isValidEdgeDense(const State& a, const State& b, CollisionContext& ctx) const;

    /// Checks the d interior states at t = i/(d+1). Returns the first colliding
    /// point found, or nullopt if all d states are valid. One-sided: nullopt
    /// does not imply dense validity.
    std::optional<State> firstSparseCollision(const State& a, const State& b, unsigned d,
                                              CollisionContext& ctx) const;

    bool couldBeValidSparse(const State& a, const State& b, unsigned d,
                            CollisionContext& ctx) const {
        return !firstSparseCollision(a, b, d, ctx).has_value();
    }

private:
    unsigned dimension_;
    std::vector<Obstacle> obstacles_;
    double cdResolution_;
};

}  // namespace plan
