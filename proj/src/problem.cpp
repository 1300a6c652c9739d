#include "plan/problem.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace plan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& pointer,
                       const std::string& what) {
    throw std::runtime_error(origin + ": " + pointer + ": " + what);
}

const json& require(const json& j, const char* field, const std::string& origin,
                    const std::string& parent) {
    auto it = j.find(field);
    if (it == j.end()) fail(origin, parent + "/" + field, "missing required field");
    return *it;
}

std::vector<double> coordArray(const json& j, unsigned dimension, const std::string& origin,
                               const std::string& pointer) {
    if (!j.is_array()) fail(origin, pointer, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) fail(origin, pointer, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    if (dimension != 0 && out.size() != dimension) {
        fail(origin, pointer,
             "expected " + std::to_string(dimension) + " coordinates, got " +
                 std::to_string(out.size()));
    }
    return out;
}

}  // namespace

ProblemDefinition parseProblem(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(origin + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) fail(origin, "", "expected a JSON object");

    const auto schema = require(j, "schema", origin, "").get<std::string>();
    if (schema != kProblemSchema) {
        fail(origin, "/schema", "unsupported schema '" + schema + "', expected '" +
                                    std::string(kProblemSchema) + "'");
    }

    ProblemDefinition p;
    p.name = require(j, "name", origin, "").get<std::string>();
    p.dimension = require(j, "dimension", origin, "").get<unsigned>();
    if (p.dimension == 0) fail(origin, "/dimension", "dimension must be positive");
    p.start = coordArray(require(j, "start", origin, ""), p.dimension, origin, "/start");

    const auto& goals = require(j, "goals", origin, "");
    if (!goals.is_array() || goals.empty()) fail(origin, "/goals", "expected a nonempty array");
    for (std::size_t i = 0; i < goals.size(); ++i) {
        p.goals.push_back(
            coordArray(goals[i], p.dimension, origin, "/goals/" + std::to_string(i)));
    }

    const auto& obstacles = require(j, "obstacles", origin, "");
    if (!obstacles.is_array()) fail(origin, "/obstacles", "expected an array");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const std::string ptr = "/obstacles/" + std::to_string(i);
        const auto& o = obstacles[i];
        if (!o.is_object()) fail(origin, ptr, "expected an object with lower/upper");
        Obstacle box;
        box.lower = coordArray(require(o, "lower", origin, ptr), p.dimension, origin,
                               ptr + "/lower");
        box.upper = coordArray(require(o, "upper", origin, ptr), p.dimension, origin,
                               ptr + "/upper");
        for (unsigned k = 0; k < p.dimension; ++k) {
            if (box.lower[k] >= box.upper[k]) {
                fail(origin, ptr, "lower must be strictly below upper in every coordinate");
            }
        }
        p.obstacles.push_back(std::move(box));
    }

    const auto objective = require(j, "objective", origin, "").get<std::string>();
    try {
        p.objective = objectiveKindFromString(objective);
    } catch (const std::exception& e) {
        fail(origin, "/objective", e.what());
    }

    p.cdResolution = require(j, "cd_resolution", origin, "").get<double>();
    if (!(p.cdResolution > 0.0)) fail(origin, "/cd_resolution", "must be positive");

    if (auto it = j.find("planner"); it != j.end()) {
        const auto& c = *it;
        if (!c.is_object()) fail(origin, "/planner", "expected an object");
        if (c.contains("batch_size")) p.planner.batchSize = c["batch_size"].get<unsigned>();
        if (c.contains("eta")) p.planner.eta = c["eta"].get<double>();
        if (c.contains("connection")) {
            const auto s = c["connection"].get<std::string>();
            if (s == "mutual_k_nearest") {
                p.planner.strategy = ConnectionStrategy::MutualKNearest;
            } else if (s == "r_disc") {
                p.planner.strategy = ConnectionStrategy::RDisc;
            } else {
                fail(origin, "/planner/connection",
                     "expected 'mutual_k_nearest' or 'r_disc', got '" + s + "'");
            }
        }
        if (c.contains("initial_sparse_checks")) {
            p.planner.initialSparseChecks = c["initial_sparse_checks"].get<unsigned>();
        }
        if (c.contains("pinned_inflation")) {
            p.planner.pinnedInflation = c["pinned_inflation"].get<double>();
        }
        if (c.contains("rrt_steer_range")) {
            p.planner.rrtSteerRange = c["rrt_steer_range"].get<double>();
        }
        if (c.contains("rrt_goal_bias")) p.planner.rrtGoalBias = c["rrt_goal_bias"].get<double>();
        if (c.contains("target_cost")) p.planner.targetCost = c["target_cost"].get<double>();
        if (c.contains("stop_after_first_solution")) {
            p.planner.stopAfterFirstSolution = c["stop_after_first_solution"].get<bool>();
        }
    }

    // Geometry validation: endpoints must be valid in the world.
    World world = p.makeWorld();
    CollisionContext ctx;
    if (!world.isValidState(p.start, ctx)) {
        throw std::runtime_error(origin + ": /start: state is invalid in the world");
    }
    for (std::size_t i = 0; i < p.goals.size(); ++i) {
        if (!world.isValidState(p.goals[i], ctx)) {
            throw std::runtime_error(origin + ": /goals/" + std::to_string(i) +
                                     ": state is invalid in the world");
        }
    }
    return p;
}

ProblemDefinition loadProblem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open problem file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parseProblem(buf.str(), path);
}

std::string problemToJson(const ProblemDefinition& p) {
    json j;
    j["schema"] = kProblemSchema;
    j["name"] = p.name;
    j["dimension"] = p.dimension;
    j["start"] = p.start;
    j["goals"] = p.goals;
    j["obstacles"] = json::array();
    for (const auto& o : p.obstacles) {
        j["obstacles"].push_back({{"lower", o.lower}, {"upper", o.upper}});
    }
    j["objective"] = toString(p.objective);
    j["cd_resolution"] = p.cdResolution;
    json c;
    c["batch_size"] = p.planner.batchSize;
    c["eta"] = p.planner.eta;
    c["connection"] = p.planner.strategy == ConnectionStrategy::MutualKNearest
                          ? "mutual_k_nearest"
                          : "r_disc";
    c["initial_sparse_checks"] = p.planner.initialSparseChecks;
    c["pinned_inflation"] = p.planner.pinnedInflation;
    c["rrt_steer_range"] = p.planner.rrtSteerRange;
    c["rrt_goal_bias"] = p.planner.rrtGoalBias;
    c["target_cost"] = p.planner.targetCost;
    c["stop_after_first_solution"] = p.planner.stopAfterFirstSolution;
    j["planner"] = c;
    return j.dump();
}

}  // namespace plan
