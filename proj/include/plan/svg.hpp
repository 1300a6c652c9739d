#pragma once

#include <string>
#include <vector>

#include "plan/world.hpp"

namespace plan {

/// A 2D rendering of planner state: obstacles, sampled states, both trees,
/// and the current solution as separate layers. Deterministic byte output.
struct SvgScene {
    const World* world = nullptr;
    std::vector<std::vector<double>> samples;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> forwardEdges;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> reverseEdges;
    std::vector<std::vector<double>> solution;
    std::vector<double> start;
    std::vector<std::vector<double>> goals;
};

/// Renders the scene; throws std::invalid_argument unless the world is 2D.
std::string renderSvg(const SvgScene& scene);

void writeSvg(const SvgScene& scene, const std::string& path);

}  // namespace plan
