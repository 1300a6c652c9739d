#include <doctest.h>

#include <cmath>

#include "plan/rrt_star.hpp"

using namespace plan;

TEST_CASE("converges near the straight-line optimum in an empty world") {
    Space space(2);
    World empty(2, {}, 0.002);
    Objective obj(ObjectiveKind::PathLength, empty);
    PlannerConfig config;
    config.targetCost = 0.7 * 1.02;
    RrtStarPlanner planner(space, empty, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 11);
    const auto record = planner.solve(5.0);
    REQUIRE(record.solved());
    CHECK(record.finalCost <= 0.7 * 1.02);
    CHECK(record.finalCost >= 0.7 - 1e-12);
}

TEST_CASE("threads the wall gap") {
    Space space(2);
    World world(2, {Obstacle{{0.45, 0.0}, {0.55, 0.35}}, Obstacle{{0.45, 0.45}, {0.55, 1.0}}},
                0.002);
    Objective obj(ObjectiveKind::PathLength, world);
    const double optimum = 2.0 * std::sqrt(0.0925) + 0.1;
    PlannerConfig config;
    config.targetCost = 1.05 * optimum;
    RrtStarPlanner planner(space, world, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 23);
    const auto record = planner.solve(20.0);
    REQUIRE(record.solved());
    CHECK(record.finalCost >= optimum - 1e-12);
    for (std::size_t i = 1; i < record.events.size(); ++i) {
        CHECK(record.events[i].cost < record.events[i - 1].cost);
        CHECK(record.events[i].time >= record.events[i - 1].time);
    }
}

TEST_CASE("solution path walks the tree from start to goal") {
    Space space(2);
    World empty(2, {}, 0.002);
    Objective obj(ObjectiveKind::PathLength, empty);
    PlannerConfig config;
    config.stopAfterFirstSolution = true;
    RrtStarPlanner planner(space, empty, obj, {0.1, 0.1}, {{0.9, 0.9}}, config, 7);
    const auto record = planner.solve(5.0);
    REQUIRE(record.solved());
    const auto& path = record.events.back().path;
    REQUIRE(path.size() >= 2);
    CHECK(path.front() == std::vector<double>{0.1, 0.1});
    CHECK(path.back() == std::vector<double>{0.9, 0.9});
    // Steering bounds every hop.
    for (std::size_t i = 1; i < path.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < 2; ++k) {
            const double dd = path[i][k] - path[i - 1][k];
            d2 += dd * dd;
        }
        CHECK(std::sqrt(d2) <= config.rrtSteerRange + 1e-12);
    }
}

TEST_CASE("deterministic per seed, different across seeds") {
    Space space(2);
    World world(2, {Obstacle{{0.4, 0.2}, {0.6, 0.8}}}, 0.002);
    Objective obj(ObjectiveKind::PathLength, world);
    PlannerConfig config;
    auto run = [&](std::uint64_t seed) {
        RrtStarPlanner p(space, world, obj, {0.1, 0.5}, {{0.9, 0.5}}, config, seed);
        return p.solve(1.0);
    };
    const auto a = run(3), b = run(3), c = run(4);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].cost == b.events[i].cost);
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].path == b.events[i].path);
    }
    CHECK(a.counters.stateChecks == b.counters.stateChecks);
    // A different seed should explore differently.
    CHECK((a.events.empty() || c.events.empty() || a.events.back().cost != c.events.back().cost ||
           a.events.back().path != c.events.back().path));
}

TEST_CASE("unreachable goal never reports a solution") {
    Space space(2);
    World blocked(2, {Obstacle{{0.45, 0.0}, {0.55, 1.0}}}, 0.002);
    Objective obj(ObjectiveKind::PathLength, blocked);
    PlannerConfig config;
    RrtStarPlanner planner(space, blocked, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 2);
    const auto record = planner.solve(0.5);
    CHECK_FALSE(record.solved());
    CHECK(std::isinf(record.finalCost));
}

TEST_CASE("invalid endpoints are rejected") {
    Space space(2);
    World world(2, {Obstacle{{0.4, 0.4}, {0.6, 0.6}}}, 0.002);
    Objective obj(ObjectiveKind::PathLength, world);
    PlannerConfig config;
    RrtStarPlanner planner(space, world, obj, {0.5, 0.5}, {{0.9, 0.9}}, config, 1);
    CHECK((planner.solve(0.1).status == RunStatus::InvalidProblem));
}

TEST_CASE("tree edges all satisfy parent cost plus edge cost") {
    Space space(2);
    World world(2, {Obstacle{{0.45, 0.0}, {0.55, 0.35}}, Obstacle{{0.45, 0.45}, {0.55, 1.0}}},
                0.002);
    Objective obj(ObjectiveKind::PathLength, world);
    PlannerConfig config;
    RrtStarPlanner planner(space, world, obj, {0.15, 0.5}, {{0.85, 0.5}}, config, 19);
    planner.solve(1.0);
    const auto& vs = planner.vertices();
    const auto& ps = planner.parents();
    CollisionContext ctx;
    Objective check(ObjectiveKind::PathLength, world);
    for (std::size_t v = 1; v < vs.size(); ++v) {
        const std::size_t p = ps[v];
        REQUIRE(p < vs.size());
        const double c = check.trueEdgeCost(State{vs[p]}, State{vs[v]}, ctx);
        CHECK(planner.gValue(v) == doctest::Approx(planner.gValue(p) + c));
    }
}
