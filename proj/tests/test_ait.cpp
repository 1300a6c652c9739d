#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "plan/ait.hpp"

using namespace plan;

namespace {

struct Fixture {
    Space space{2};
    World world{2,
                {Obstacle{{0.45, 0.0}, {0.55, 0.35}}, Obstacle{{0.45, 0.45}, {0.55, 1.0}}},
                0.002};
    Objective objective{ObjectiveKind::PathLength, world};

    AitPlanner make(std::uint64_t seed, PlannerConfig config = {}) {
        return AitPlanner(space, world, objective, {0.15, 0.5}, {{0.85, 0.5}}, config, seed);
    }
};

const double kWallGapOptimum = 2.0 * std::sqrt(0.09 + 0.0025) + 0.1;  // 0.708276...

void checkLabelsMatchDijkstra(const AitPlanner& planner) {
    const auto& graph = planner.graph();
    const auto dist = oracle::dijkstraCostToGo(graph);
    for (StateId x = 0; x < graph.stateCount(); ++x) {
        if (!graph.isActive(x) || x == graph.startId()) continue;
        CHECK(planner.hExp(x) == dist[x]);
        CHECK(planner.hCon(x) == dist[x]);
        CHECK(planner.isConsistent(x));
    }
}

}  // namespace

TEST_CASE("reverse search at quiescence equals Dijkstra cost-to-go") {
    Fixture f;
    PlannerConfig config;
    config.initialBatch = 150;
    auto planner = f.make(7, config);
    planner.improveApproximation();
    planner.runReverseToQuiescence();
    checkLabelsMatchDijkstra(planner);
    CHECK(planner.hCon(planner.graph().goalIds()[0]) == 0.0);
}

TEST_CASE("reverse keys order by total path estimate then cost-to-go") {
    Fixture f;
    auto planner = f.make(1);
    const StateId goal = planner.graph().goalIds()[0];
    const auto key = planner.reverseKey(goal);
    CHECK(key[0] == doctest::Approx(0.7));  // 0 + gHat(goal)
    CHECK(key[1] == 0.0);
}

TEST_CASE("branch invalidation repairs to the from-scratch answer") {
    Fixture f;
    PlannerConfig config;
    config.initialBatch = 120;
    auto planner = f.make(21, config);
    planner.improveApproximation();
    planner.runReverseToQuiescence();

    auto& graph = planner.graph();
    Rng rng(5);
    int invalidations = 0;
    for (int round = 0; round < 60; ++round) {
        // Pick a random reverse-tree edge and blacklist it.
        std::vector<StateId> members;
        for (StateId x = 0; x < graph.stateCount(); ++x) {
            if (graph.isActive(x) && graph.inReverseTree(x) && !graph.isGoal(x) &&
                graph.reverseParent(x) != kNoState) {
                members.push_back(x);
            }
        }
        if (members.empty()) break;
        const StateId child = members[rng.uniformIndex(members.size())];
        graph.blacklist(graph.reverseParent(child), child);
        planner.invalidateReverseBranch(child);
        planner.runReverseToQuiescence();
        checkLabelsMatchDijkstra(planner);
        ++invalidations;
    }
    CHECK(invalidations >= 30);
}

TEST_CASE("update_state picks the argmin parent with id tie-breaks") {
    Fixture f;
    PlannerConfig config;
    config.initialBatch = 100;
    auto planner = f.make(3, config);
    planner.improveApproximation();
    planner.runReverseToQuiescence();
    const auto& graph = planner.graph();
    for (StateId x = 0; x < graph.stateCount(); ++x) {
        if (!graph.isActive(x) || graph.isGoal(x) || x == graph.startId()) continue;
        if (!std::isfinite(planner.hCon(x))) continue;
        double best = kInf;
        StateId bestY = kNoState;
        for (StateId y : graph.neighbors(x)) {
            const double v = planner.hExp(y) + graph.cHat(x, y);
            if (v < best) {
                best = v;
                bestY = y;
            }
        }
        CHECK(planner.hCon(x) == best);
        CHECK(graph.reverseParent(x) == bestY);
    }
}

TEST_CASE("goal and start labels are pinned") {
    Fixture f;
    auto planner = f.make(9);
    const StateId goal = planner.graph().goalIds()[0];
    planner.updateState(goal);  // guarded: stays at zero
    CHECK(planner.hCon(goal) == 0.0);
    planner.runReverseToQuiescence();
    CHECK(planner.hExp(goal) == 0.0);
    CHECK(planner.hCon(goal) == 0.0);
    planner.updateState(planner.graph().startId());  // guarded: untouched
    CHECK(planner.hCon(planner.graph().startId()) == kInf);
}

TEST_CASE("suspension rules") {
    Fixture f;
    auto planner = f.make(11);
    // Fresh planner: goals queued, start expanded.
    CHECK_FALSE(planner.reverseQueueEmpty());
    // Reverse work pending and forward targets inconsistent: not suspended.
    CHECK_FALSE(planner.reverseSuspended());
    planner.runReverseToQuiescence();
    // Empty reverse queue always suspends.
    CHECK(planner.reverseSuspended());
}

TEST_CASE("two-state problem connects directly") {
    Space space(2);
    World empty(2, {}, 0.002);
    Objective obj(ObjectiveKind::PathLength, empty);
    PlannerConfig config;
    config.stopAfterFirstSolution = true;
    AitPlanner planner(space, empty, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 4);
    const auto record = planner.solve(5.0);
    CHECK((record.status == RunStatus::Solved));
    REQUIRE(record.solved());
    CHECK(record.finalCost == doctest::Approx(0.7));
    CHECK(record.events.front().path.size() == 2);
}

TEST_CASE("wall gap is solved close to the fixture optimum") {
    Fixture f;
    PlannerConfig config;
    config.targetCost = 1.01 * kWallGapOptimum;
    auto planner = f.make(42, config);
    const auto record = planner.solve(10.0);
    REQUIRE(record.solved());
    CHECK(record.finalCost <= 1.01 * kWallGapOptimum);
    CHECK(record.finalCost >= kWallGapOptimum - 1e-9);

    // Anytime monotonicity.
    for (std::size_t i = 1; i < record.events.size(); ++i) {
        CHECK(record.events[i].cost < record.events[i - 1].cost);
        CHECK(record.events[i].time >= record.events[i - 1].time);
    }
}

TEST_CASE("runs are deterministic per seed") {
    Fixture f;
    PlannerConfig config;
    auto r1 = f.make(77, config).solve(0.4);
    auto r2 = f.make(77, config).solve(0.4);
    REQUIRE(r1.events.size() == r2.events.size());
    for (std::size_t i = 0; i < r1.events.size(); ++i) {
        CHECK(r1.events[i].cost == r2.events[i].cost);
        CHECK(r1.events[i].time == r2.events[i].time);
        CHECK(r1.events[i].path == r2.events[i].path);
    }
    CHECK(r1.counters.stateChecks == r2.counters.stateChecks);
    CHECK(r1.counters.denseEdgeChecks == r2.counters.denseEdgeChecks);
}

TEST_CASE("unreachable goal yields no solution") {
    // Wall with no gap.
    Space space(2);
    World blocked(2, {Obstacle{{0.45, 0.0}, {0.55, 1.0}}}, 0.002);
    Objective obj(ObjectiveKind::PathLength, blocked);
    PlannerConfig config;
    AitPlanner planner(space, blocked, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 2);
    const auto record = planner.solve(0.3);
    CHECK_FALSE(record.solved());
    CHECK(record.finalCost == kInf);
}

TEST_CASE("invalid endpoints are rejected up front") {
    Fixture f;
    PlannerConfig config;
    AitPlanner bad(f.space, f.world, f.objective, {0.5, 0.2}, {{0.85, 0.5}}, config, 1);
    CHECK((bad.solve(1.0).status == RunStatus::InvalidProblem));
}

TEST_CASE("frozen approximation converges instead of batching") {
    Fixture f;
    PlannerConfig config;
    config.freezeApproximation = true;
    config.initialBatch = 150;
    auto planner = f.make(13, config);
    const auto record = planner.solve(30.0);
    CHECK((record.status == RunStatus::Converged));
    CHECK(planner.graph().stateCount() == 152);
}
