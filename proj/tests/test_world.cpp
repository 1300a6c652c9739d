#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "plan/world.hpp"

using namespace plan;

namespace {
World wallGap() {
    return World(2,
                 {Obstacle{{0.45, 0.0}, {0.55, 0.35}}, Obstacle{{0.45, 0.45}, {0.55, 1.0}}},
                 0.002);
}
}  // namespace

TEST_CASE("obstacles are closed boxes") {
    const Obstacle box{{0.2, 0.3}, {0.4, 0.6}};
    CHECK(box.contains({0.3, 0.4}));
    CHECK(box.contains({0.2, 0.3}));   // boundary is inside
    CHECK(box.contains({0.4, 0.6}));
    CHECK_FALSE(box.contains({0.19, 0.4}));
    CHECK_FALSE(box.contains({0.3, 0.61}));
}

TEST_CASE("distance to a box") {
    const Obstacle box{{0.5, 0.5}, {0.6, 0.6}};
    CHECK(box.distanceTo({0.55, 0.55}) == 0.0);
    CHECK(box.distanceTo({0.4, 0.55}) == doctest::Approx(0.1));          // face
    CHECK(box.distanceTo({0.2, 0.2}) == doctest::Approx(std::sqrt(0.18)));  // corner
}

TEST_CASE("world construction validates its inputs") {
    CHECK_THROWS_AS(World(2, {}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(World(2, {Obstacle{{0.5, 0.5}, {0.4, 0.6}}}, 0.01), std::invalid_argument);
}

TEST_CASE("state validity and clearance") {
    const World world = wallGap();
    CollisionContext ctx;
    CHECK(world.isValidState({0.15, 0.5}, ctx));
    CHECK_FALSE(world.isValidState({0.5, 0.2}, ctx));
    CHECK_FALSE(world.isValidState({0.45, 0.35}, ctx));  // boundary
    CHECK(world.isValidState({0.5, 0.4}, ctx));          // inside the gap
    CHECK(ctx.counters.stateChecks == 4);

    CHECK(world.clearance({0.15, 0.5}, ctx) == doctest::Approx(0.3));
    CHECK(world.clearance({0.5, 0.4}, ctx) == doctest::Approx(0.05));
    const World empty(2, {}, 0.01);
    CHECK(empty.clearance({0.5, 0.5}, ctx) == kInf);
    CHECK(ctx.counters.stateChecks == 4);  // clearance does not count as a check
}

TEST_CASE("dense edge validation") {
    const World world = wallGap();
    CollisionContext ctx;
    const State a{{0.15, 0.5}, 0};
    const State b{{0.85, 0.5}, 1};
    CHECK_FALSE(world.isValidEdgeDense(a, b, ctx));  // straight shot hits the wall
    CHECK(ctx.counters.denseEdgeChecks == 1);

    const State c{{0.15, 0.4}, 2};
    const State d{{0.85, 0.4}, 3};
    CHECK(world.isValidEdgeDense(c, d, ctx));  // through the gap
    CHECK(world.isValidEdgeDense(d, c, ctx));  // symmetric

    // Degenerate edge reduces to a state check.
    CHECK(world.isValidEdgeDense(a, a, ctx));
}

TEST_CASE("sparse collision checks interior points only") {
    const World world = World(2, {Obstacle{{0.18, 0.0}, {0.34, 1.0}}}, 0.01);
    CollisionContext ctx;
    const State a{{0.1, 0.5}, 0};
    const State b{{0.5, 0.5}, 1};

    // d = 1 checks t = 1/2 -> (0.3, 0.5), inside the box.
    const auto hit1 = world.firstSparseCollision(a, b, 1, ctx);
    REQUIRE(hit1.has_value());
    CHECK(hit1->coords[0] == doctest::Approx(0.3));

    // d = 3 checks t = 1/4 first -> (0.2, 0.5).
    const auto hit3 = world.firstSparseCollision(a, b, 3, ctx);
    REQUIRE(hit3.has_value());
    CHECK(hit3->coords[0] == doctest::Approx(0.2));

    // Sparse validity does not imply dense validity: with the box shrunk in y
    // the same edge misses all interior probes of d = 1 but not denser ones.
    const World thin(2, {Obstacle{{0.22, 0.0}, {0.24, 1.0}}}, 0.01);
    CHECK(thin.couldBeValidSparse(a, b, 1, ctx));
    CHECK_FALSE(thin.isValidEdgeDense(a, b, ctx));
}

TEST_CASE("sparse-invalid implies dense-invalid") {
    const World world = wallGap();
    CollisionContext ctx;
    Rng rng(17);
    Space space(2);
    for (int i = 0; i < 500; ++i) {
        const State a{space.sampleUniform(rng), 0};
        const State b{space.sampleUniform(rng), 1};
        for (unsigned d : {1u, 2u, 4u}) {
            if (!world.couldBeValidSparse(a, b, d, ctx)) {
                CHECK_FALSE(world.isValidEdgeDense(a, b, ctx));
            }
        }
    }
}

TEST_CASE("state checks drive the deterministic clock") {
    const World world = wallGap();
    CollisionContext ctx;
    const auto before = ctx.clock.units();
    world.isValidState({0.15, 0.5}, ctx);
    CHECK(ctx.clock.units() == before + 1);
}
