#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "plan/approx.hpp"
#include "plan/lex_queue.hpp"
#include "plan/run_record.hpp"

namespace plan {

/// EIT*: reverse edge-queue A* with adaptive sparse collision detection
/// computing calculated cost and effort heuristics, and a forward edge-queue
/// search selecting among minimum-effort, estimated-cost, and lower-bound
/// edges under an inflation factor.
class EitPlanner {
public:
    EitPlanner(const Space& space, const World& world, const Objective& objective,
               const std::vector<double>& start, const std::vector<std::vector<double>>& goals,
               PlannerConfig config, std::uint64_t seed);

    RunRecord solve(double budgetSeconds);

    // -- Introspection ---------------------------------------------------------

    ApproxGraph& graph() { return *graph_; }
    const ApproxGraph& graph() const { return *graph_; }
    CollisionContext& collisionContext() { return ctx_; }
    double currentCost() const { return currentCost_; }
    double inflation() const { return w_; }
    unsigned sparseChecks() const { return d_; }
    const std::vector<unsigned>& sparseCheckTrace() const { return dTrace_; }

    double hHatLabel(StateId x) const { return hHat_[x]; }
    double hBarLabel(StateId x) const { return hBar_[x]; }
    double effortLabel(StateId x) const { return eTogo_[x]; }
    bool isClosed(StateId x) const { return closed_[x]; }

    double sHat(StateId s, StateId t) const;
    double sBar(StateId s, StateId t);
    double rBar(StateId s, StateId t) const;
    std::array<double, 2> reverseKey(StateId s, StateId t) const;

    bool reverseSuspended();
    void iterateReverse();
    void iterateForward();
    void runReverseToQuiescence();
    void restartReverseSearch();

    /// Performs one prune-and-batch step, as the solve loop does when both
    /// searches are exhausted.
    void improveApproximation();
    bool saturated() const { return saturated_; }

    /// The edge the three-way forward selection would pop next.
    std::pair<StateId, StateId> peekBestForwardEdge() const;

    std::size_t forwardQueueSize() const { return fwdKeys_.size(); }
    std::size_t reverseQueueSize() const { return reverseQueue_.size(); }

    /// Blacklist certificates: every reverse-side blacklisted pair with the
    /// colliding interior state that justified it.
    struct BlacklistWitness {
        StateId source;
        StateId target;
        std::vector<double> point;
    };
    const std::vector<BlacklistWitness>& blacklistWitnesses() const { return witnesses_; }

    std::vector<std::vector<double>> solutionPath() const;

private:
    struct FwdKeys {
        double sHat;
        double sBar;
        double rBar;
    };

    // w-aware multiplication: infinity * 0 is 0, so a zero lower bound is only
    // met by a zero estimate.
    static double mulW(double w, double x);

    void qfInsert(StateId s, StateId t);
    void qfErase(StateId s, StateId t);
    void qfExpand(StateId x);
    void qfRefreshTarget(StateId t);
    void qfRefreshSource(StateId s);
    void qfClear();
    double minSHat() const;

    void qrInsert(StateId s, StateId t);
    void qrRefreshSource(StateId s);

    void onClosed(StateId x);
    void onEnteredReverseTree(StateId x);

    void updateSolutionCost();
    void recordEvent();

    const Space* space_;
    const World* world_;
    const Objective* objective_;
    PlannerConfig config_;
    CollisionContext ctx_;
    Rng rng_;
    std::unique_ptr<ApproxGraph> graph_;

    std::vector<double> hHat_;   // admissible calculated cost-to-go
    std::vector<double> hBar_;   // inadmissible calculated cost-to-go
    std::vector<double> eTogo_;  // calculated effort-to-go
    std::vector<bool> closed_;

    LexQueue<2> reverseQueue_;
    std::unordered_map<StateId, std::unordered_set<StateId>> qrBySource_;

    // Forward queue: one key record per edge, three orderings.
    std::unordered_map<std::uint64_t, FwdKeys> fwdKeys_;
    std::set<std::tuple<double, StateId, StateId>> bySHat_;
    std::set<std::tuple<double, StateId, StateId>> bySBar_;
    std::set<std::tuple<double, double, StateId, StateId>> byEffort_;  // (rBar, sHat, s, t)
    std::unordered_map<StateId, std::unordered_set<StateId>> qfBySource_;
    std::unordered_map<StateId, std::unordered_set<StateId>> qfByTarget_;
    std::size_t closedTargets_ = 0;   // queue entries whose target is closed
    std::size_t revTreeTargets_ = 0;  // queue entries whose target is in the reverse tree

    double w_ = kInf;
    unsigned d_ = 1;
    std::vector<unsigned> dTrace_;
    std::vector<BlacklistWitness> witnesses_;

    double currentCost_ = kInf;
    std::size_t batchCount_ = 0;
    bool saturated_ = false;
    RunRecord record_;
};

}  // namespace plan
