#pragma once

#include <optional>
#include <vector>

#include "plan/rng.hpp"
#include "plan/types.hpp"

namespace plan {

/// A point in the open unit hypercube (0,1)^n. Ids are assigned by the
/// sampling container and are strictly increasing in sampling order.
struct State {
    std::vector<double> coords;
    StateId id = kNoState;
};

double distance(const State& a, const State& b);
double distance(const std::vector<double>& a, const std::vector<double>& b);

/// Coordinatewise a + t * (b - a) for t in [0, 1].
State interpolate(const State& a, const State& b, double t);

/// Static facts about the unit hypercube in a given dimension.
struct SpaceDescriptor {
    unsigned dimension = 0;
    double lebesgueMeasure = 1.0;  // lambda(X), always 1 for the unit cube
    double unitBallMeasure = 0.0;  // lambda(B_{1,n}) = pi^{n/2} / Gamma(n/2 + 1)

    explicit SpaceDescriptor(unsigned n);
};

/// Unit-hypercube state space with uniform and direct informed sampling.
class Space {
public:
    explicit Space(unsigned dimension) : descriptor_(dimension) {}

    const SpaceDescriptor& descriptor() const { return descriptor_; }
    unsigned dimension() const { return descriptor_.dimension; }

    /// I.i.d. uniform(0,1) coordinates; boundary values are rejected.
    std::vector<double> sampleUniform(Rng& rng) const;

    /// Samples uniformly over the union of per-goal prolate hyperspheroids
    /// intersected with X. Returns nullopt when the informed set is degenerate
    /// (currentCost at or below the minimum start-goal distance for every goal).
    /// currentCost == inf falls back to uniform sampling.
    std::optional<std::vector<double>> sampleInformed(const State& start,
                                                      const std::vector<State>& goals,
                                                      double currentCost, Rng& rng) const;

    /// Lebesgue measure of the informed set, as the sum of per-goal
    /// hyperspheroid measures capped at lambda(X). Returns lambda(X) when
    /// currentCost is infinite or degenerate.
    double informedMeasure(const State& start, const std::vector<State>& goals,
                           double currentCost) const;

private:
    SpaceDescriptor descriptor_;

    std::optional<std::vector<double>> sampleGoalSpheroid(const State& start, const State& goal,
                                                          double currentCost, Rng& rng) const;

    double goalSpheroidMeasure(const State& start, const State& goal, double currentCost) const;

    static bool insideSpheroid(const std::vector<double>& x, const State& start, const State& goal,
                               double currentCost);
};

}  // namespace plan
