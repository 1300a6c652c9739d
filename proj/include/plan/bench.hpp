#pragma once

#include <string>
#include <vector>

#include "plan/problem.hpp"
#include "plan/run_record.hpp"

namespace plan {

inline constexpr const char* kTrialSchema = "plan-trial-v1";

/// Runs one seeded trial of the named planner ("ait", "eit", "rrtstar").
RunRecord runTrial(const ProblemDefinition& problem, const std::string& plannerId,
                   std::uint64_t seed, double budgetSeconds);

/// Trial i uses seed baseSeed + i. Trials run in parallel up to PLAN_THREADS
/// (default: hardware concurrency); results are ordered by trial index.
std::vector<RunRecord> runTrials(const ProblemDefinition& problem, const std::string& plannerId,
                                 unsigned trials, double budgetSeconds, std::uint64_t baseSeed);

/// Self-contained trial line: embeds the problem so certification needs no
/// side file.
std::string trialToJson(const ProblemDefinition& problem, const RunRecord& record,
                        double budgetSeconds);

/// Writes one JSONL file per planner: <dir>/<problem>_<planner>.jsonl.
void writeTrials(const std::string& dir, const ProblemDefinition& problem,
                 const std::string& plannerId, const std::vector<RunRecord>& records,
                 double budgetSeconds);

// -- Aggregation ----------------------------------------------------------------

/// Lower median of a sample that may contain infinities.
double lowerMedian(std::vector<double> values);

/// P(Binomial(n, 1/2) <= k), exact summation.
double binomialCdfHalf(unsigned n, unsigned k);

/// 1-based order-statistic ranks (lo, hi) of a two-sided nonparametric
/// confidence interval for the median at the given two-sided level.
std::pair<unsigned, unsigned> medianCiRanks(unsigned n, double level);

struct AggregateRow {
    std::string problem;
    std::string planner;
    double time = 0.0;
    double successRate = 0.0;
    double medianCost = kInf;
    double ciLower = kInf;
    double ciUpper = kInf;
    double medianInitialTime = kInf;
    double medianInitialCost = kInf;
};

struct TrialData {
    std::string problem;
    std::string planner;
    double budget = 0.0;
    std::vector<SolutionEvent> events;  // paths omitted when not needed
};

/// Cost-at-time aggregation over a log-spaced grid; unsolved-at-t counts as
/// infinite cost. Permutation-invariant in the records.
std::vector<AggregateRow> aggregate(const std::vector<TrialData>& trials,
                                    unsigned gridPoints = 50, double ciLevel = 0.99);

/// Reads every *.jsonl under `dir` and writes the aggregate CSV.
void aggregateDirectory(const std::string& dir, const std::string& outCsv);

// -- Certification ----------------------------------------------------------------

struct CertifyReport {
    std::size_t trials = 0;
    std::size_t events = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

/// Re-validates every event of a trial line: monotone costs, nondecreasing
/// times, endpoint correctness, dense validity of every segment, and the
/// recomputed cost within relTol of the recorded one.
void certifyTrialJson(const std::string& line, const std::string& origin, CertifyReport& report,
                      double relTol = 1e-9);

CertifyReport certifyDirectory(const std::string& dir, double relTol = 1e-9);

}  // namespace plan
