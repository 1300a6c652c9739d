#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plan/ait.hpp"
#include "plan/bench.hpp"
#include "plan/eit.hpp"
#include "plan/rrt_star.hpp"
#include "plan/svg.hpp"

namespace {

void fillGraphScene(const plan::ApproxGraph& graph, plan::SvgScene& scene) {
    for (plan::StateId x : graph.activeStates()) {
        scene.samples.push_back(graph.state(x).coords);
        if (graph.inForwardTree(x) && graph.forwardParent(x) != plan::kNoState) {
            scene.forwardEdges.push_back(
                {graph.state(graph.forwardParent(x)).coords, graph.state(x).coords});
        }
        if (graph.inReverseTree(x) && graph.reverseParent(x) != plan::kNoState) {
            scene.reverseEdges.push_back(
                {graph.state(graph.reverseParent(x)).coords, graph.state(x).coords});
        }
    }
}

int snapshot(const plan::ProblemDefinition& problem, const std::string& plannerId,
             const std::vector<double>& times, std::uint64_t seed, const std::string& outDir) {
    std::filesystem::create_directories(outDir);
    const plan::Space space(problem.dimension);
    const plan::World world = problem.makeWorld();
    const plan::Objective objective(problem.objective, world);
    for (double t : times) {
        plan::SvgScene scene;
        scene.world = &world;
        scene.start = problem.start;
        scene.goals = problem.goals;
        // Determinism makes re-running to each time equivalent to pausing one
        // run, so each snapshot uses a fresh planner.
        if (plannerId == "ait") {
            plan::AitPlanner planner(space, world, objective, problem.start, problem.goals,
                                     problem.planner, seed);
            planner.solve(t);
            fillGraphScene(planner.graph(), scene);
            scene.solution = planner.solutionPath();
        } else if (plannerId == "eit") {
            plan::EitPlanner planner(space, world, objective, problem.start, problem.goals,
                                     problem.planner, seed);
            planner.solve(t);
            fillGraphScene(planner.graph(), scene);
            scene.solution = planner.solutionPath();
        } else if (plannerId == "rrtstar") {
            plan::RrtStarPlanner planner(space, world, objective, problem.start, problem.goals,
                                         problem.planner, seed);
            planner.solve(t);
            const auto& vs = planner.vertices();
            const auto& ps = planner.parents();
            for (std::size_t v = 0; v < vs.size(); ++v) {
                scene.samples.push_back(vs[v]);
                if (ps[v] != static_cast<std::size_t>(-1)) {
                    scene.forwardEdges.push_back({vs[ps[v]], vs[v]});
                }
            }
            scene.solution = planner.solutionPath();
        } else {
            std::cerr << "unknown planner '" << plannerId << "'\n";
            return 1;
        }
        char stamp[32];
        std::snprintf(stamp, sizeof(stamp), "%.3f", t);
        const auto path = std::filesystem::path(outDir) /
                          (problem.name + "_" + plannerId + "_t" + stamp + ".svg");
        plan::writeSvg(scene, path.string());
        std::cout << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based path planning: trials, aggregation, snapshots, certification"};
    app.require_subcommand(1);

    std::string problemPath;
    std::string plannerId = "eit";
    std::string outPath;
    std::string inPath;
    unsigned trials = 50;
    double budget = 10.0;
    std::uint64_t seed = 1;
    std::vector<double> atTimes;

    auto* run = app.add_subcommand("run", "Run seeded trials and write JSONL records");
    run->add_option("--problem", problemPath, "Problem JSON file")->required();
    run->add_option("--planner", plannerId, "ait | eit | rrtstar")->required();
    run->add_option("--trials", trials, "Number of trials");
    run->add_option("--budget", budget, "Per-trial budget in seconds of accounted work");
    run->add_option("--seed", seed, "Base seed; trial i uses seed+i");
    run->add_option("--out", outPath, "Output directory")->required();

    auto* agg = app.add_subcommand("aggregate", "Aggregate trial JSONL files into a CSV");
    agg->add_option("--in", inPath, "Directory of .jsonl trial files")->required();
    agg->add_option("--out", outPath, "Output CSV path")->required();

    auto* snap = app.add_subcommand("snapshot", "Render SVG snapshots at given times");
    snap->add_option("--problem", problemPath, "Problem JSON file")->required();
    snap->add_option("--planner", plannerId, "ait | eit | rrtstar")->required();
    snap->add_option("--at-times", atTimes, "Snapshot times (seconds)")
        ->required()
        ->delimiter(',');
    snap->add_option("--seed", seed, "Seed");
    snap->add_option("--out", outPath, "Output directory")->required();

    auto* cert = app.add_subcommand("certify", "Re-validate every recorded solution");
    cert->add_option("--in", inPath, "Directory of .jsonl trial files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto problem = plan::loadProblem(problemPath);
            const auto records = plan::runTrials(problem, plannerId, trials, budget, seed);
            plan::writeTrials(outPath, problem, plannerId, records, budget);
            unsigned solved = 0;
            for (const auto& r : records) {
                if (r.solved()) ++solved;
            }
            std::cout << problem.name << " " << plannerId << ": " << solved << "/"
                      << records.size() << " trials solved\n";
            return 0;
        }
        if (agg->parsed()) {
            plan::aggregateDirectory(inPath, outPath);
            std::cout << "wrote " << outPath << "\n";
            return 0;
        }
        if (snap->parsed()) {
            const auto problem = plan::loadProblem(problemPath);
            return snapshot(problem, plannerId, atTimes, seed, outPath);
        }
        if (cert->parsed()) {
            const auto report = plan::certifyDirectory(inPath);
            std::cout << "certified " << report.events << " events across " << report.trials
                      << " trials\n";
            for (const auto& f : report.failures) std::cout << "FAIL " << f << "\n";
            return report.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
