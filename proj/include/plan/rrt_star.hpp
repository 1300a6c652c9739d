#pragma once

#include <vector>

#include "plan/kdtree.hpp"
#include "plan/objective.hpp"
#include "plan/run_record.hpp"
#include "plan/space.hpp"
#include "plan/world.hpp"

namespace plan {

/// RRT* reference planner with goal biasing and informed sampling once a
/// solution exists. Benchmark baseline only; no approximation sharing with
/// the bidirectional planners.
class RrtStarPlanner {
public:
    RrtStarPlanner(const Space& space, const World& world, const Objective& objective,
                   const std::vector<double>& start, const std::vector<std::vector<double>>& goals,
                   PlannerConfig config, std::uint64_t seed);

    RunRecord solve(double budgetSeconds);

    CollisionContext& collisionContext() { return ctx_; }
    double currentCost() const { return currentCost_; }
    std::size_t treeSize() const { return coords_.size(); }
    const std::vector<std::vector<double>>& vertices() const { return coords_; }
    const std::vector<std::size_t>& parents() const { return parent_; }
    double gValue(std::size_t v) const { return g_[v]; }
    std::vector<std::vector<double>> solutionPath() const;

private:
    void iterate();
    std::size_t nearest(const std::vector<double>& q) const;
    std::vector<std::size_t> near(const std::vector<double>& q, double r) const;
    void propagate(std::size_t v, double delta);
    void maybeRebuildIndex();
    void updateSolutionCost();
    void recordEvent();

    const Space* space_;
    const World* world_;
    const Objective* objective_;
    PlannerConfig config_;
    CollisionContext ctx_;
    Rng rng_;

    std::vector<std::vector<double>> coords_;
    std::vector<double> g_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> children_;

    State startState_;
    std::vector<State> goalStates_;
    std::vector<std::size_t> goalVertex_;  // tree index per goal, or npos

    // Index over the first indexed_ vertices; the tail is scanned linearly.
    // The index points into indexSnapshot_, which is frozen between rebuilds.
    KdTree index_;
    std::vector<std::vector<double>> indexSnapshot_;
    std::size_t indexed_ = 0;

    double currentCost_ = kInf;
    RunRecord record_;
};

}  // namespace plan
