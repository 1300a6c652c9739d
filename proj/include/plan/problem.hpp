#pragma once

#include <string>
#include <vector>

#include "plan/objective.hpp"
#include "plan/run_record.hpp"
#include "plan/world.hpp"

namespace plan {

/// A benchmark problem: world geometry, endpoints, objective, and optional
/// planner overrides. Loaded from a schema-versioned JSON file.
struct ProblemDefinition {
    std::string name;
    unsigned dimension = 0;
    std::vector<double> start;
    std::vector<std::vector<double>> goals;
    std::vector<Obstacle> obstacles;
    ObjectiveKind objective = ObjectiveKind::PathLength;
    double cdResolution = 0.002;
    PlannerConfig planner;

    World makeWorld() const { return World(dimension, obstacles, cdResolution); }
};

inline constexpr const char* kProblemSchema = "plan-problem-v1";

/// Parses and geometry-validates a problem file. Throws std::runtime_error
/// with the offending JSON pointer on schema violations, and after parsing
/// rejects starts or goals that are invalid in the world.
ProblemDefinition loadProblem(const std::string& path);

/// Same, but from an in-memory JSON string (diagnostics name `origin`).
ProblemDefinition parseProblem(const std::string& text, const std::string& origin);

std::string problemToJson(const ProblemDefinition& p);

}  // namespace plan
