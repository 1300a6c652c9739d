#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "plan/bench.hpp"
#include "plan/svg.hpp"

using namespace plan;
using nlohmann::json;

namespace {

std::string wallGapProblemText() {
    return R"({
      "schema": "plan-problem-v1",
      "name": "wall_gap_test",
      "dimension": 2,
      "start": [0.15, 0.5],
      "goals": [[0.85, 0.5]],
      "objective": "path_length",
      "cd_resolution": 0.002,
      "obstacles": [
        {"lower": [0.45, 0.0], "upper": [0.55, 0.35]},
        {"lower": [0.45, 0.45], "upper": [0.55, 1.0]}
      ]
    })";
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("plan_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("problem files parse with overrides") {
    auto text = json::parse(wallGapProblemText());
    text["planner"] = {{"batch_size", 50}, {"initial_sparse_checks", 2}, {"target_cost", 0.75}};
    const auto p = parseProblem(text.dump(), "inline");
    CHECK(p.name == "wall_gap_test");
    CHECK(p.dimension == 2);
    CHECK(p.obstacles.size() == 2);
    CHECK(p.planner.batchSize == 50);
    CHECK(p.planner.initialSparseChecks == 2);
    CHECK(p.planner.targetCost == 0.75);
    CHECK((p.objective == ObjectiveKind::PathLength));
}

TEST_CASE("problem parse errors carry a JSON pointer") {
    auto bad = json::parse(wallGapProblemText());
    bad.erase("start");
    CHECK_THROWS_WITH_AS(parseProblem(bad.dump(), "inline"),
                         doctest::Contains("/start"), std::runtime_error);

    auto wrongSchema = json::parse(wallGapProblemText());
    wrongSchema["schema"] = "plan-problem-v9";
    CHECK_THROWS_WITH_AS(parseProblem(wrongSchema.dump(), "inline"),
                         doctest::Contains("/schema"), std::runtime_error);

    auto badGoal = json::parse(wallGapProblemText());
    badGoal["goals"] = {{0.5, 0.5}};  // inside the wall
    CHECK_THROWS_AS(parseProblem(badGoal.dump(), "inline"), std::runtime_error);
}

TEST_CASE("round trip through problemToJson") {
    const auto p = parseProblem(wallGapProblemText(), "inline");
    const auto q = parseProblem(problemToJson(p), "roundtrip");
    CHECK(q.name == p.name);
    CHECK(q.start == p.start);
    CHECK(q.goals == p.goals);
    CHECK(q.obstacles.size() == p.obstacles.size());
    CHECK(q.cdResolution == p.cdResolution);
}

TEST_CASE("lower median") {
    CHECK(lowerMedian({3.0, 1.0, 2.0}) == 2.0);
    CHECK(lowerMedian({4.0, 1.0, 3.0, 2.0}) == 2.0);  // lower of the two middles
    std::vector<double> half(50, kInf);
    std::fill(half.begin(), half.begin() + 25, 1.0);
    CHECK(lowerMedian(half) == 1.0);
    std::vector<double> minority(50, kInf);
    std::fill(minority.begin(), minority.begin() + 24, 1.0);
    CHECK(std::isinf(lowerMedian(minority)));
}

TEST_CASE("nonparametric median CI ranks") {
    CHECK(medianCiRanks(50, 0.99) == std::pair<unsigned, unsigned>{15, 36});
    // Cross-check the defining inequalities for a few n.
    for (unsigned n : {10u, 25u, 50u, 101u}) {
        const auto [lo, hi] = medianCiRanks(n, 0.99);
        REQUIRE(lo >= 1);
        CHECK(hi == n - lo + 1);
        if (binomialCdfHalf(n, 1) <= 0.005) {
            // lo is the largest k with a small-enough lower tail.
            CHECK(binomialCdfHalf(n, lo) <= 0.005);
            CHECK(binomialCdfHalf(n, lo + 1) > 0.005);
        } else {
            CHECK(lo == 1);  // whole-range fallback for tiny n
        }
    }
    CHECK(binomialCdfHalf(50, 50) == doctest::Approx(1.0));
    CHECK(binomialCdfHalf(4, 2) == doctest::Approx(11.0 / 16.0));
}

TEST_CASE("aggregation is permutation invariant and tracks event costs") {
    std::vector<TrialData> trials;
    for (int i = 0; i < 9; ++i) {
        TrialData t;
        t.problem = "p";
        t.planner = "x";
        t.budget = 10.0;
        SolutionEvent ev;
        ev.time = 1.0 + 0.1 * i;
        ev.cost = 2.0 - 0.1 * i;
        t.events.push_back(ev);
        trials.push_back(t);
    }
    auto rows = aggregate(trials, 20);
    REQUIRE(rows.size() == 20);
    std::reverse(trials.begin(), trials.end());
    const auto rows2 = aggregate(trials, 20);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].time == rows2[i].time);
        CHECK(rows[i].medianCost == rows2[i].medianCost);
        CHECK(rows[i].successRate == rows2[i].successRate);
    }
    // Before any event time, nothing is solved; at the end everything is.
    CHECK(rows.front().successRate == 0.0);
    CHECK(std::isinf(rows.front().medianCost));
    CHECK(rows.back().successRate == 1.0);
    CHECK(rows.back().medianCost == doctest::Approx(1.6));  // lower median of 2.0..1.2
    // Grid spans budget*1e-3 .. budget.
    CHECK(rows.front().time == doctest::Approx(0.01));
    CHECK(rows.back().time == doctest::Approx(10.0));
}

TEST_CASE("trial JSON is deterministic and self-contained") {
    const auto p = parseProblem(wallGapProblemText(), "inline");
    const auto r1 = runTrial(p, "eit", 3, 0.5);
    const auto r2 = runTrial(p, "eit", 3, 0.5);
    const auto j1 = trialToJson(p, r1, 0.5);
    const auto j2 = trialToJson(p, r2, 0.5);
    CHECK(j1 == j2);
    const auto parsed = json::parse(j1);
    CHECK(parsed["schema"] == "plan-trial-v1");
    CHECK(parsed["problem"]["name"] == "wall_gap_test");
    CHECK(parsed["planner"] == "eit");
    CHECK(parsed["seed"] == 3);
}

TEST_CASE("unknown planner id is rejected") {
    const auto p = parseProblem(wallGapProblemText(), "inline");
    CHECK_THROWS_AS(runTrial(p, "prm", 0, 0.1), std::invalid_argument);
}

TEST_CASE("end to end: run, write, aggregate, certify") {
    TempDir dir;
    const auto p = parseProblem(wallGapProblemText(), "inline");
    for (const char* planner : {"ait", "eit", "rrtstar"}) {
        const auto records = runTrials(p, planner, 4, 0.5, 100);
        REQUIRE(records.size() == 4);
        writeTrials(dir.path.string(), p, planner, records, 0.5);
    }
    CHECK(std::filesystem::exists(dir.path / "wall_gap_test_ait.jsonl"));

    const auto csv = (dir.path / "stats.csv").string();
    aggregateDirectory(dir.path.string(), csv);
    std::ifstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header ==
          "problem,planner,time,success_rate,median_cost,ci_lower,ci_upper,"
          "median_initial_time,median_initial_cost");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 3 * 50);

    const auto report = certifyDirectory(dir.path.string());
    CHECK(report.ok());
    CHECK(report.trials == 12);
    CHECK(report.events > 0);
}

TEST_CASE("runTrials honors a PLAN_THREADS cap and stays deterministic") {
    const auto p = parseProblem(wallGapProblemText(), "inline");
    setenv("PLAN_THREADS", "1", 1);
    const auto serial = runTrials(p, "ait", 3, 0.3, 7);
    setenv("PLAN_THREADS", "3", 1);
    const auto parallel = runTrials(p, "ait", 3, 0.3, 7);
    unsetenv("PLAN_THREADS");
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].finalCost == parallel[i].finalCost);
        REQUIRE(serial[i].events.size() == parallel[i].events.size());
        for (std::size_t k = 0; k < serial[i].events.size(); ++k) {
            CHECK(serial[i].events[k].cost == parallel[i].events[k].cost);
            CHECK(serial[i].events[k].time == parallel[i].events[k].time);
        }
    }
}

TEST_CASE("certification flags corrupted trials") {
    const auto p = parseProblem(wallGapProblemText(), "inline");
    auto record = runTrial(p, "eit", 1, 1.0);
    REQUIRE(record.solved());

    SUBCASE("tampered cost") {
        auto j = json::parse(trialToJson(p, record, 1.0));
        j["events"].back()["cost"] = j["events"].back()["cost"].get<double>() * 0.5;
        CertifyReport report;
        certifyTrialJson(j.dump(), "tampered", report);
        CHECK_FALSE(report.ok());
    }
    SUBCASE("path through an obstacle") {
        auto j = json::parse(trialToJson(p, record, 1.0));
        auto& path = j["events"].back()["path"];
        REQUIRE(path.size() >= 2);
        path[1] = {0.5, 0.5};  // inside the wall
        CertifyReport report;
        certifyTrialJson(j.dump(), "tampered", report);
        CHECK_FALSE(report.ok());
    }
    SUBCASE("wrong endpoint") {
        auto j = json::parse(trialToJson(p, record, 1.0));
        auto& path = j["events"].back()["path"];
        path[0] = {0.2, 0.5};
        CertifyReport report;
        certifyTrialJson(j.dump(), "tampered", report);
        CHECK_FALSE(report.ok());
    }
    SUBCASE("untampered passes") {
        CertifyReport report;
        certifyTrialJson(trialToJson(p, record, 1.0), "clean", report);
        CHECK(report.ok());
        CHECK(report.trials == 1);
    }
}

TEST_CASE("svg rendering") {
    World world(2, {Obstacle{{0.45, 0.0}, {0.55, 0.35}}}, 0.002);
    SvgScene scene;
    scene.world = &world;
    scene.start = {0.15, 0.5};
    scene.goals = {{0.85, 0.5}};
    scene.samples = {{0.3, 0.3}, {0.6, 0.7}};
    scene.forwardEdges = {{{0.15, 0.5}, {0.3, 0.3}}};
    scene.solution = {{0.15, 0.5}, {0.85, 0.5}};
    const auto svg = renderSvg(scene);
    CHECK(svg == renderSvg(scene));  // byte determinism
    CHECK(svg.find("<svg") != std::string::npos);
    for (const char* layer : {"obstacles", "samples", "forward-tree", "solution", "endpoints"}) {
        CHECK(svg.find(layer) != std::string::npos);
    }
    CHECK(svg.find("data-solved=\"true\"") != std::string::npos);

    World w3(3, {}, 0.002);
    SvgScene bad;
    bad.world = &w3;
    CHECK_THROWS_AS(renderSvg(bad), std::invalid_argument);
}
