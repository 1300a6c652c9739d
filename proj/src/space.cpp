#include "plan/space.hpp"

#include <cmath>
#include <stdexcept>

namespace plan {

namespace {
constexpr int kMaxRejections = 1000000;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: dimension mismatch");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double distance(const State& a, const State& b) { return distance(a.coords, b.coords); }

State interpolate(const State& a, const State& b, double t) {
    if (a.coords.size() != b.coords.size()) {
        throw std::invalid_argument("interpolate: dimension mismatch");
    }
    State out;
    out.coords.resize(a.coords.size());
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        out.coords[i] = a.coords[i] + t * (b.coords[i] - a.coords[i]);
    }
    return out;
}

SpaceDescriptor::SpaceDescriptor(unsigned n) : dimension(n) {
    if (n == 0) throw std::invalid_argument("SpaceDescriptor: dimension must be positive");
    const double half = static_cast<double>(n) / 2.0;
    unitBallMeasure = std::pow(M_PI, half) / std::tgamma(half + 1.0);
}

std::vector<double> Space::sampleUniform(Rng& rng) const {
    std::vector<double> x(dimension());
    for (auto& c : x) c = rng.uniform01();
    return x;
}

bool Space::insideSpheroid(const std::vector<double>& x, const State& start, const State& goal,
                           double currentCost) {
    return distance(x, start.coords) + distance(x, goal.coords) < currentCost;
}

double Space::goalSpheroidMeasure(const State& start, const State& goal,
                                  double currentCost) const {
    const double cMin = distance(start, goal);
    if (!(currentCost > cMin)) return 0.0;
    if (!std::isfinite(currentCost)) return descriptor_.lebesgueMeasure;
    const unsigned n = dimension();
    const double r1 = currentCost / 2.0;
    const double ri = std::sqrt(currentCost * currentCost - cMin * cMin) / 2.0;
    return descriptor_.unitBallMeasure * r1 * std::pow(ri, static_cast<double>(n - 1));
}

double Space::informedMeasure(const State& start, const std::vector<State>& goals,
                              double currentCost) const {
    if (!std::isfinite(currentCost)) return descriptor_.lebesgueMeasure;
    double sum = 0.0;
    for (const auto& g : goals) sum += goalSpheroidMeasure(start, g, currentCost);
    if (sum <= 0.0) return descriptor_.lebesgueMeasure;  // degenerate-input rule
    return std::min(sum, descriptor_.lebesgueMeasure);
}

std::optional<std::vector<double>> Space::sampleGoalSpheroid(const State& start, const State& goal,
                                                             double currentCost, Rng& rng) const {
    const unsigned n = dimension();
    const double cMin = distance(start, goal);
    if (!(currentCost > cMin)) return std::nullopt;

    const double r1 = currentCost / 2.0;
    const double ri = std::sqrt(currentCost * currentCost - cMin * cMin) / 2.0;

    // Householder reflection mapping e1 onto the transverse axis. A reflection
    // rather than a rotation is fine: the ball sample is symmetric.
    std::vector<double> axis(n);
    for (unsigned i = 0; i < n; ++i) axis[i] = (goal.coords[i] - start.coords[i]) / cMin;
    std::vector<double> w(n, 0.0);
    double wNorm = 0.0;
    for (unsigned i = 0; i < n; ++i) {
        w[i] = (i == 0 ? 1.0 : 0.0) - axis[i];
        wNorm += w[i] * w[i];
    }
    wNorm = std::sqrt(wNorm);
    const bool useReflection = wNorm > 1e-12;
    if (useReflection) {
        for (auto& v : w) v /= wNorm;
    }

    std::vector<double> center(n);
    for (unsigned i = 0; i < n; ++i) center[i] = 0.5 * (start.coords[i] + goal.coords[i]);

    // Uniform point in the unit n-ball: normalized Gaussian direction scaled
    // by U^{1/n}.
    std::vector<double> b(n);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& v : b) {
            v = rng.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
    } while (norm == 0.0);
    const double radius = std::pow(rng.uniform01(), 1.0 / static_cast<double>(n));
    for (auto& v : b) v *= radius / norm;

    // Scale by the spheroid axes, reflect, translate.
    b[0] *= r1;
    for (unsigned i = 1; i < n; ++i) b[i] *= ri;
    if (useReflection) {
        double dot = 0.0;
        for (unsigned i = 0; i < n; ++i) dot += w[i] * b[i];
        for (unsigned i = 0; i < n; ++i) b[i] -= 2.0 * dot * w[i];
    }
    for (unsigned i = 0; i < n; ++i) b[i] += center[i];
    return b;
}

std::optional<std::vector<double>> Space::sampleInformed(const State& start,
                                                         const std::vector<State>& goals,
                                                         double currentCost, Rng& rng) const {
    if (!std::isfinite(currentCost)) return sampleUniform(rng);

    std::vector<double> measures(goals.size());
    double total = 0.0;
    for (std::size_t i = 0; i < goals.size(); ++i) {
        measures[i] = goalSpheroidMeasure(start, goals[i], currentCost);
        total += measures[i];
    }
    if (total <= 0.0) return std::nullopt;

    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        // Pick a goal proportional to its spheroid measure.
        double pick = rng.uniform01() * total;
        std::size_t gi = 0;
        for (; gi + 1 < goals.size(); ++gi) {
            if (pick < measures[gi]) break;
            pick -= measures[gi];
        }
        auto x = sampleGoalSpheroid(start, goals[gi], currentCost, rng);
        if (!x) continue;

        bool inCube = true;
        for (const double c : *x) {
            if (!(c > 0.0 && c < 1.0)) {
                inCube = false;
                break;
            }
        }
        if (!inCube) continue;

        // Reject points that also fall in a lower-indexed goal's spheroid so
        // the union is sampled uniformly without double counting.
        bool duplicate = false;
        for (std::size_t j = 0; j < gi; ++j) {
            if (insideSpheroid(*x, start, goals[j], currentCost)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        return x;
    }
    return std::nullopt;
}

}  // namespace plan
