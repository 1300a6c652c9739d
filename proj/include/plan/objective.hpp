#pragma once

#include <string>

#include "plan/world.hpp"

namespace plan {

enum class ObjectiveKind { PathLength, Clearance };

ObjectiveKind objectiveKindFromString(const std::string& s);
std::string toString(ObjectiveKind kind);

/// Optimization objective: true edge costs plus the a priori cost and effort
/// heuristics that drive the planners.
///
/// Path length: cost = arc length, admissible and inadmissible heuristics are
/// both the Euclidean distance. Clearance: cost = integral of 1/delta over arc
/// length with delta floored at 1e-6, the admissible heuristic is identically
/// zero and the inadmissible one is 2/(delta(a) + delta(b)).
class Objective {
public:
    static constexpr double kClearanceFloor = 1e-6;

    Objective(ObjectiveKind kind, const World& world)
        : kind_(kind), world_(&world), quadraturePitch_(world.cdResolution()) {}

    ObjectiveKind kind() const { return kind_; }
    double quadraturePitch() const { return quadraturePitch_; }
    void setQuadraturePitch(double pitch) { quadraturePitch_ = pitch; }

    /// The edge must already be known collision-free.
    double trueEdgeCost(const State& a, const State& b, CollisionContext& ctx) const;

    /// Admissible edge-cost heuristic c-hat. Pure, never touches the world.
    double admissibleEdgeHeuristic(const State& a, const State& b) const;

    /// Possibly inadmissible edge-cost heuristic c-bar.
    double inadmissibleEdgeHeuristic(const State& a, const State& b, CollisionContext& ctx) const;

    /// Edge-effort heuristic e-bar: Euclidean distance over the collision
    /// detection resolution, unrounded.
    double effortEdgeHeuristic(const State& a, const State& b) const;

    /// Whether the admissible heuristic is the Euclidean metric, which is the
    /// condition for direct informed sampling to apply.
    bool informedSamplingApplies() const { return kind_ == ObjectiveKind::PathLength; }

    double flooredClearance(const std::vector<double>& x, CollisionContext& ctx) const;

private:
    ObjectiveKind kind_;
    const World* world_;
    double quadraturePitch_;
};

}  // namespace plan
