#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "plan/space.hpp"

using namespace plan;

TEST_CASE("distance and interpolation") {
    State a{{0.1, 0.2}, 0};
    State b{{0.4, 0.6}, 1};
    CHECK(distance(a, b) == doctest::Approx(0.5).epsilon(1e-12));  // 3-4-5 scaled
    CHECK(distance(a, a) == 0.0);
    CHECK_THROWS_AS(distance(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2}),
                    std::invalid_argument);

    const State mid = interpolate(a, b, 0.5);
    CHECK(mid.coords[0] == doctest::Approx(0.25));
    CHECK(mid.coords[1] == doctest::Approx(0.4));
    CHECK(interpolate(a, b, 0.0).coords == a.coords);
    CHECK(interpolate(a, b, 1.0).coords == b.coords);
}

TEST_CASE("unit ball measures") {
    CHECK(SpaceDescriptor(1).unitBallMeasure == doctest::Approx(2.0));
    CHECK(SpaceDescriptor(2).unitBallMeasure == doctest::Approx(M_PI));
    CHECK(SpaceDescriptor(3).unitBallMeasure == doctest::Approx(4.0 / 3.0 * M_PI));
}

TEST_CASE("uniform sampling is deterministic per seed and uniform-ish") {
    Space space(2);
    Rng r1(42), r2(42), r3(43);
    const auto a = space.sampleUniform(r1);
    const auto b = space.sampleUniform(r2);
    CHECK(a == b);
    CHECK(a != space.sampleUniform(r3));

    // Quadrant concentration: P(both coords < 1/2) ~ Binomial(n, 1/4).
    Rng rng(7);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto s = space.sampleUniform(rng);
        CHECK(s[0] > 0.0);
        CHECK(s[0] < 1.0);
        if (s[0] < 0.5 && s[1] < 0.5) ++hits;
    }
    CHECK(std::abs(hits / double(n) - 0.25) < 0.01);
}

TEST_CASE("informed spheroid measure matches the closed form and a Monte Carlo oracle") {
    Space space(2);
    const State start{{0.25, 0.5}, 0};
    const std::vector<State> goals{State{{0.75, 0.5}, 1}};
    const double cost = 0.6;  // c_min = 0.5

    const double a = cost / 2.0;
    const double b = std::sqrt(cost * cost - 0.25) / 2.0;
    const double analytic = M_PI * a * b;
    CHECK(analytic == doctest::Approx(0.15630).epsilon(1e-3));
    CHECK(space.informedMeasure(start, goals, cost) == doctest::Approx(analytic).epsilon(1e-12));

    // Monte Carlo oracle: fraction of uniform cube samples inside the spheroid.
    Rng rng(11);
    const int n = 400000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const auto x = space.sampleUniform(rng);
        const double dStart = std::hypot(x[0] - 0.25, x[1] - 0.5);
        const double dGoal = std::hypot(x[0] - 0.75, x[1] - 0.5);
        if (dStart + dGoal <= cost) ++inside;
    }
    CHECK(inside / double(n) == doctest::Approx(analytic).epsilon(0.01));
}

TEST_CASE("informed samples lie in the informed set") {
    Space space(2);
    const State start{{0.25, 0.5}, 0};
    const std::vector<State> goals{State{{0.75, 0.5}, 1}};
    const double cost = 0.6;
    Rng rng(3);
    for (int i = 0; i < 5000; ++i) {
        const auto s = space.sampleInformed(start, goals, cost, rng);
        REQUIRE(s.has_value());
        const double dStart = std::hypot((*s)[0] - 0.25, (*s)[1] - 0.5);
        const double dGoal = std::hypot((*s)[0] - 0.75, (*s)[1] - 0.5);
        CHECK(dStart + dGoal <= cost + 1e-12);
        CHECK((*s)[0] > 0.0);
        CHECK((*s)[0] < 1.0);
    }
}

TEST_CASE("informed sampling edge cases") {
    Space space(2);
    const State start{{0.25, 0.5}, 0};
    const std::vector<State> goals{State{{0.75, 0.5}, 1}};
    Rng rng(5);
    // Infinite cost falls back to uniform.
    CHECK(space.sampleInformed(start, goals, kInf, rng).has_value());
    CHECK(space.informedMeasure(start, goals, kInf) == 1.0);
    // Degenerate: cost at the minimum start-goal distance.
    CHECK_FALSE(space.sampleInformed(start, goals, 0.5, rng).has_value());
    // Measure is capped at the cube's measure.
    CHECK(space.informedMeasure(start, goals, 10.0) == 1.0);
}
