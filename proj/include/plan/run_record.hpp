#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plan/approx.hpp"

namespace plan {

/// One solution-improvement event: deterministic elapsed time, the improved
/// cost, the solution path, and the dense-edge-check counter at the event.
struct SolutionEvent {
    double time = 0.0;
    double cost = kInf;
    std::vector<std::vector<double>> path;
    std::uint64_t denseEdgeChecks = 0;
};

enum class RunStatus { Solved, Timeout, Converged, InvalidProblem, Aborted };

std::string toString(RunStatus status);

struct RunRecord {
    std::uint64_t seed = 0;
    std::string plannerId;
    std::vector<SolutionEvent> events;
    RunStatus status = RunStatus::Timeout;
    double finalCost = kInf;
    double elapsed = 0.0;
    CollisionCounters counters;
    std::string diagnostic;

    bool solved() const { return !events.empty(); }
};

/// Shared planner knobs; per-problem overrides come from the problem file.
struct PlannerConfig {
    unsigned batchSize = 100;
    double eta = 1.001;
    ConnectionStrategy strategy = ConnectionStrategy::MutualKNearest;
    unsigned initialSparseChecks = 1;  // EIT* only
    double pinnedInflation = -1.0;     // EIT*: >= 1 fixes w; < 0 uses the
                                       // infinite-until-first-solution policy
    double rrtSteerRange = 0.3;        // RRT* only
    double rrtGoalBias = 0.05;         // RRT* only

    // Stop conditions beyond the time budget.
    double targetCost = -1.0;          // stop once current cost <= target (< 0: off)
    bool stopAfterFirstSolution = false;
    bool freezeApproximation = false;  // solve only the first batch's graph
    unsigned initialBatch = 0;         // override first batch size (0: batchSize)
};

}  // namespace plan
