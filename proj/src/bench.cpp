#include "plan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "plan/ait.hpp"
#include "plan/eit.hpp"
#include "plan/rrt_star.hpp"

namespace plan {

namespace {

using nlohmann::json;

json numberOrString(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double parseNumber(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw std::runtime_error("unexpected numeric string '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace

std::string toString(RunStatus status) {
    switch (status) {
        case RunStatus::Solved: return "solved";
        case RunStatus::Timeout: return "timeout";
        case RunStatus::Converged: return "converged";
        case RunStatus::InvalidProblem: return "invalid_problem";
        case RunStatus::Aborted: return "aborted";
    }
    return "unknown";
}

RunRecord runTrial(const ProblemDefinition& problem, const std::string& plannerId,
                   std::uint64_t seed, double budgetSeconds) {
    const Space space(problem.dimension);
    const World world = problem.makeWorld();
    const Objective objective(problem.objective, world);
    if (plannerId == "ait") {
        AitPlanner planner(space, world, objective, problem.start, problem.goals, problem.planner,
                           seed);
        return planner.solve(budgetSeconds);
    }
    if (plannerId == "eit") {
        EitPlanner planner(space, world, objective, problem.start, problem.goals, problem.planner,
                           seed);
        return planner.solve(budgetSeconds);
    }
    if (plannerId == "rrtstar") {
        RrtStarPlanner planner(space, world, objective, problem.start, problem.goals,
                               problem.planner, seed);
        return planner.solve(budgetSeconds);
    }
    throw std::invalid_argument("unknown planner '" + plannerId +
                                "' (expected ait, eit, or rrtstar)");
}

std::vector<RunRecord> runTrials(const ProblemDefinition& problem, const std::string& plannerId,
                                 unsigned trials, double budgetSeconds, std::uint64_t baseSeed) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PLAN_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) threads = static_cast<unsigned>(parsed);
    }
    threads = std::min(threads, trials);

    std::vector<RunRecord> records(trials);
    std::atomic<unsigned> next{0};
    auto worker = [&] {
        while (true) {
            const unsigned i = next.fetch_add(1);
            if (i >= trials) return;
            try {
                records[i] = runTrial(problem, plannerId, baseSeed + i, budgetSeconds);
            } catch (const std::exception& e) {
                records[i].seed = baseSeed + i;
                records[i].plannerId = plannerId;
                records[i].status = RunStatus::Aborted;
                records[i].diagnostic = e.what();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

std::string trialToJson(const ProblemDefinition& problem, const RunRecord& record,
                        double budgetSeconds) {
    json j;
    j["schema"] = kTrialSchema;
    j["problem"] = json::parse(problemToJson(problem));
    j["planner"] = record.plannerId;
    j["seed"] = record.seed;
    j["budget"] = budgetSeconds;
    j["status"] = toString(record.status);
    j["final_cost"] = numberOrString(record.finalCost);
    j["elapsed"] = record.elapsed;
    j["counters"] = {{"state_checks", record.counters.stateChecks},
                     {"dense_edge_checks", record.counters.denseEdgeChecks},
                     {"sparse_edge_checks", record.counters.sparseEdgeChecks},
                     {"true_cost_evaluations", record.counters.trueCostEvaluations}};
    if (!record.diagnostic.empty()) j["diagnostic"] = record.diagnostic;
    j["events"] = json::array();
    for (const auto& ev : record.events) {
        j["events"].push_back({{"time", ev.time},
                               {"cost", ev.cost},
                               {"dense_edge_checks", ev.denseEdgeChecks},
                               {"path", ev.path}});
    }
    return j.dump();
}

void writeTrials(const std::string& dir, const ProblemDefinition& problem,
                 const std::string& plannerId, const std::vector<RunRecord>& records,
                 double budgetSeconds) {
    std::filesystem::create_directories(dir);
    const auto path =
        std::filesystem::path(dir) / (problem.name + "_" + plannerId + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& r : records) out << trialToJson(problem, r, budgetSeconds) << "\n";
}

// -- Aggregation ----------------------------------------------------------------

double lowerMedian(std::vector<double> values) {
    if (values.empty()) return kInf;
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

double binomialCdfHalf(unsigned n, unsigned k) {
    if (k >= n) return 1.0;
    // Sum C(n, i) / 2^n iteratively; n is a trial count, well within double range.
    double term = std::pow(0.5, n);  // C(n, 0) / 2^n
    double sum = term;
    for (unsigned i = 1; i <= k; ++i) {
        term *= static_cast<double>(n - i + 1) / static_cast<double>(i);
        sum += term;
    }
    return std::min(sum, 1.0);
}

std::pair<unsigned, unsigned> medianCiRanks(unsigned n, double level) {
    const double tail = (1.0 - level) / 2.0;
    unsigned lo = 0;
    for (unsigned k = 0; k < n; ++k) {
        if (binomialCdfHalf(n, k) <= tail) {
            lo = k;
        } else {
            break;
        }
    }
    if (lo == 0) return {1, n};  // too few samples for the level; full range
    return {lo, n - lo + 1};
}

std::vector<AggregateRow> aggregate(const std::vector<TrialData>& trials, unsigned gridPoints,
                                    double ciLevel) {
    std::map<std::pair<std::string, std::string>, std::vector<const TrialData*>> groups;
    for (const auto& t : trials) groups[{t.problem, t.planner}].push_back(&t);

    std::vector<AggregateRow> rows;
    for (const auto& [key, group] : groups) {
        double budget = 0.0;
        for (const auto* t : group) budget = std::max(budget, t->budget);
        if (budget <= 0.0) budget = 1.0;
        const unsigned n = static_cast<unsigned>(group.size());
        const auto [loRank, hiRank] = medianCiRanks(n, ciLevel);

        // Median initial solution time and cost over the group (unsolved = inf).
        std::vector<double> initTimes;
        std::vector<double> initCosts;
        for (const auto* t : group) {
            initTimes.push_back(t->events.empty() ? kInf : t->events.front().time);
            initCosts.push_back(t->events.empty() ? kInf : t->events.front().cost);
        }
        const double medInitTime = lowerMedian(initTimes);
        const double medInitCost = lowerMedian(initCosts);

        const double tMin = budget * 1e-3;
        for (unsigned i = 0; i < gridPoints; ++i) {
            const double frac = gridPoints == 1 ? 1.0 : static_cast<double>(i) / (gridPoints - 1);
            const double t = tMin * std::pow(budget / tMin, frac);
            std::vector<double> costs;
            unsigned solved = 0;
            for (const auto* trial : group) {
                double c = kInf;
                for (const auto& ev : trial->events) {
                    if (ev.time <= t) c = ev.cost;
                }
                if (std::isfinite(c)) ++solved;
                costs.push_back(c);
            }
            std::sort(costs.begin(), costs.end());
            AggregateRow row;
            row.problem = key.first;
            row.planner = key.second;
            row.time = t;
            row.successRate = static_cast<double>(solved) / n;
            row.medianCost = costs[(costs.size() - 1) / 2];
            row.ciLower = costs[loRank - 1];
            row.ciUpper = costs[hiRank - 1];
            row.medianInitialTime = medInitTime;
            row.medianInitialCost = medInitCost;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

TrialData parseTrialLine(const std::string& line, bool withPaths) {
    const json j = json::parse(line);
    TrialData t;
    t.problem = j.at("problem").at("name").get<std::string>();
    t.planner = j.at("planner").get<std::string>();
    t.budget = j.at("budget").get<double>();
    for (const auto& ev : j.at("events")) {
        SolutionEvent e;
        e.time = ev.at("time").get<double>();
        e.cost = parseNumber(ev.at("cost"));
        e.denseEdgeChecks = ev.at("dense_edge_checks").get<std::uint64_t>();
        if (withPaths) e.path = ev.at("path").get<std::vector<std::vector<double>>>();
        t.events.push_back(std::move(e));
    }
    return t;
}

std::vector<std::filesystem::path> jsonlFiles(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string formatValue(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

void aggregateDirectory(const std::string& dir, const std::string& outCsv) {
    std::vector<TrialData> trials;
    for (const auto& file : jsonlFiles(dir)) {
        std::ifstream in(file);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) trials.push_back(parseTrialLine(line, false));
        }
    }
    if (trials.empty()) throw std::runtime_error(dir + ": no trial .jsonl files found");

    std::ofstream out(outCsv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + outCsv);
    out << "problem,planner,time,success_rate,median_cost,ci_lower,ci_upper,"
           "median_initial_time,median_initial_cost\n";
    for (const auto& row : aggregate(trials)) {
        out << row.problem << ',' << row.planner << ',' << formatValue(row.time) << ','
            << formatValue(row.successRate) << ',' << formatValue(row.medianCost) << ','
            << formatValue(row.ciLower) << ',' << formatValue(row.ciUpper) << ','
            << formatValue(row.medianInitialTime) << ',' << formatValue(row.medianInitialCost)
            << "\n";
    }
}

// -- Certification ----------------------------------------------------------------

void certifyTrialJson(const std::string& line, const std::string& origin, CertifyReport& report,
                      double relTol) {
    ++report.trials;
    json j;
    try {
        j = json::parse(line);
    } catch (const std::exception& e) {
        report.failures.push_back(origin + ": unparseable trial line: " + e.what());
        return;
    }
    ProblemDefinition problem;
    try {
        problem = parseProblem(j.at("problem").dump(), origin);
    } catch (const std::exception& e) {
        report.failures.push_back(origin + ": embedded problem invalid: " + e.what());
        return;
    }
    const World world = problem.makeWorld();
    const Objective objective(problem.objective, world);
    CollisionContext ctx;

    double prevCost = kInf;
    double prevTime = -kInf;
    for (std::size_t i = 0; i < j.at("events").size(); ++i) {
        ++report.events;
        const auto& ev = j["events"][i];
        const std::string where = origin + " event " + std::to_string(i);
        const double cost = parseNumber(ev.at("cost"));
        const double time = ev.at("time").get<double>();
        if (!(cost < prevCost)) {
            report.failures.push_back(where + ": cost " + formatValue(cost) +
                                      " not strictly below previous " + formatValue(prevCost));
        }
        if (time < prevTime) {
            report.failures.push_back(where + ": time decreased");
        }
        prevCost = cost;
        prevTime = time;

        const auto path = ev.at("path").get<std::vector<std::vector<double>>>();
        if (path.size() < 2) {
            report.failures.push_back(where + ": path has fewer than two states");
            continue;
        }
        if (path.front() != problem.start) {
            report.failures.push_back(where + ": path does not start at the start state");
        }
        if (std::find(problem.goals.begin(), problem.goals.end(), path.back()) ==
            problem.goals.end()) {
            report.failures.push_back(where + ": path does not end at a goal state");
        }
        double recomputed = 0.0;
        bool valid = true;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const State a{path[s], static_cast<StateId>(s)};
            const State b{path[s + 1], static_cast<StateId>(s + 1)};
            if (!world.isValidEdgeDense(a, b, ctx)) {
                report.failures.push_back(where + ": segment " + std::to_string(s) +
                                          " fails dense validation");
                valid = false;
                break;
            }
            recomputed += objective.trueEdgeCost(a, b, ctx);
        }
        if (valid) {
            const double scale = std::max({1.0, std::abs(cost), std::abs(recomputed)});
            if (std::abs(recomputed - cost) > relTol * scale) {
                report.failures.push_back(where + ": recomputed cost " + formatValue(recomputed) +
                                          " differs from recorded " + formatValue(cost));
            }
        }
    }
}

CertifyReport certifyDirectory(const std::string& dir, double relTol) {
    CertifyReport report;
    const auto files = jsonlFiles(dir);
    if (files.empty()) throw std::runtime_error(dir + ": no trial .jsonl files found");
    for (const auto& file : files) {
        std::ifstream in(file);
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty()) continue;
            certifyTrialJson(line, file.filename().string() + ":" + std::to_string(lineNo),
                             report, relTol);
        }
    }
    return report;
}

}  // namespace plan
