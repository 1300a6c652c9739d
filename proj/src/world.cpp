#include "plan/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plan {

bool Obstacle::contains(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

double Obstacle::distanceTo(const std::vector<double>& x) const {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::max({lower[i] - x[i], x[i] - upper[i], 0.0});
        sq += d * d;
    }
    return std::sqrt(sq);
}

World::World(unsigned dimension, std::vector<Obstacle> obstacles, double cdResolution)
    : dimension_(dimension), obstacles_(std::move(obstacles)), cdResolution_(cdResolution) {
    if (cdResolution_ <= 0.0) throw std::invalid_argument("World: cd_resolution must be positive");
    for (const auto& o : obstacles_) {
        if (o.lower.size() != dimension_ || o.upper.size() != dimension_) {
            throw std::invalid_argument("World: obstacle dimension mismatch");
        }
        for (unsigned i = 0; i < dimension_; ++i) {
            if (!(o.lower[i] < o.upper[i])) {
                throw std::invalid_argument("World: obstacle must have lower < upper");
            }
        }
    }
}

bool World::isValidState(const std::vector<double>& x, CollisionContext& ctx) const {
    ++ctx.counters.stateChecks;
    ctx.clock.charge(1);
    for (const auto& o : obstacles_) {
        if (o.contains(x)) return false;
    }
    return true;
}

double World::clearance(const std::vector<double>& x, CollisionContext& ctx) const {
    ctx.clock.charge(1);
    double best = kInf;
    for (const auto& o : obstacles_) {
        best = std::min(best, o.distanceTo(x));
    }
    return best;
}

bool World::isValidEdgeDense(const State& a, const State& b, CollisionContext& ctx) const {
    ++ctx.counters.denseEdgeChecks;
    const double len = distance(a, b);
    const auto segments =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len / cdResolution_)));
    // Alternate front/back so invalid edges are usually rejected early.
    for (std::uint64_t j = 0; j <= segments; ++j) {
        const std::uint64_t i = (j % 2 == 0) ? j / 2 : segments - j / 2;
        const double t = static_cast<double>(i) / static_cast<double>(segments);
        if (!isValidState(interpolate(a, b, t).coords, ctx)) return false;
    }
    return true;
}

std::optional<State> World::firstSparseCollision(const State& a, const State& b, unsigned d,
                                                 CollisionContext& ctx) const {
    if (d < 1) throw std::invalid_argument("firstSparseCollision: d must be >= 1");
    ++ctx.counters.sparseEdgeChecks;
    for (unsigned i = 1; i <= d; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(d + 1);
        State x = interpolate(a, b, t);
        if (!isValidState(x.coords, ctx)) return x;
    }
    return std::nullopt;
}

}  // namespace plan
