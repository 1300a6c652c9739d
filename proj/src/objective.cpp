#include "plan/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plan {

ObjectiveKind objectiveKindFromString(const std::string& s) {
    if (s == "path_length") return ObjectiveKind::PathLength;
    if (s == "clearance") return ObjectiveKind::Clearance;
    throw std::invalid_argument("unknown objective kind: " + s);
}

std::string toString(ObjectiveKind kind) {
    return kind == ObjectiveKind::PathLength ? "path_length" : "clearance";
}

double Objective::flooredClearance(const std::vector<double>& x, CollisionContext& ctx) const {
    return std::max(world_->clearance(x, ctx), kClearanceFloor);
}

double Objective::trueEdgeCost(const State& a, const State& b, CollisionContext& ctx) const {
    ++ctx.counters.trueCostEvaluations;
    const double len = distance(a, b);
    if (kind_ == ObjectiveKind::PathLength) return len;
    if (len == 0.0) return 0.0;

    // Composite trapezoid of 1/delta over arc length on the dense check grid.
    const auto segments =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len / quadraturePitch_)));
    const double h = len / static_cast<double>(segments);
    double sum = 0.0;
    for (std::uint64_t i = 0; i <= segments; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(segments);
        const double inv = 1.0 / flooredClearance(interpolate(a, b, t).coords, ctx);
        ctx.clock.charge(WorkClock::kQuadratureNode);
        sum += (i == 0 || i == segments) ? 0.5 * inv : inv;
    }
    return h * sum;
}

double Objective::admissibleEdgeHeuristic(const State& a, const State& b) const {
    if (kind_ == ObjectiveKind::PathLength) return distance(a, b);
    return 0.0;
}

double Objective::inadmissibleEdgeHeuristic(const State& a, const State& b,
                                            CollisionContext& ctx) const {
    if (kind_ == ObjectiveKind::PathLength) return distance(a, b);
    return 2.0 / (flooredClearance(a.coords, ctx) + flooredClearance(b.coords, ctx));
}

double Objective::effortEdgeHeuristic(const State& a, const State& b) const {
    return distance(a, b) / world_->cdResolution();
}

}  // namespace plan
