#pragma once

#include <array>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "plan/approx.hpp"
#include "plan/lex_queue.hpp"
#include "plan/run_record.hpp"

namespace plan {

/// AIT*: asymmetric bidirectional search with a reverse vertex-queue LPA*
/// computing an approximation-specific admissible cost-to-go heuristic
/// (without collision detection) and a forward edge-queue A* exploiting it.
class AitPlanner {
public:
    AitPlanner(const Space& space, const World& world, const Objective& objective,
               const std::vector<double>& start, const std::vector<std::vector<double>>& goals,
               PlannerConfig config, std::uint64_t seed);

    RunRecord solve(double budgetSeconds);

    // -- Introspection (tests, snapshots) -------------------------------------

    ApproxGraph& graph() { return *graph_; }
    const ApproxGraph& graph() const { return *graph_; }
    CollisionContext& collisionContext() { return ctx_; }
    double currentCost() const { return currentCost_; }
    double hCon(StateId x) const { return hCon_[x]; }
    double hExp(StateId x) const { return hExp_[x]; }
    bool isConsistent(StateId x) const { return hCon_[x] == hExp_[x]; }
    std::array<double, 2> reverseKey(StateId x) const;
    bool reverseQueueEmpty() const { return reverseQueue_.empty(); }
    std::size_t reverseQueueSize() const { return reverseQueue_.size(); }
    std::size_t forwardQueueSize() const { return forwardQueue_.size(); }

    void updateState(StateId x);
    bool inReverseBranch(StateId root, StateId x) const;
    void iterateReverse();
    void invalidateReverseBranch(StateId x);
    bool reverseSuspended() const { return !continueReverse(); }
    void iterateForward();

    /// Performs one prune-and-batch step, as the solve loop does when both
    /// searches are exhausted.
    void improveApproximation();
    bool saturated() const { return saturated_; }

    /// Drains the reverse queue completely (full LPA* computation). Test and
    /// repair-equivalence driver; the solve loop interleaves instead.
    void runReverseToQuiescence();

    /// Reinitializes the reverse search and forward queue on the current
    /// approximation, as done after each batch.
    void reinitializeSearches();

    std::vector<std::vector<double>> solutionPath() const;

private:
    std::array<double, 3> forwardKey(StateId s, StateId t) const;
    bool continueReverse() const;
    bool continueForward() const;
    void updateSolutionCost();
    void recordEvent();
    void collectBranch(StateId x, std::vector<StateId>& branch);

    void qfInsert(StateId s, StateId t);
    void qfErase(StateId s, StateId t);
    void qfExpand(StateId x);
    void qfRefreshTarget(StateId t);
    void qfRefreshSource(StateId s);

    const Space* space_;
    const World* world_;
    const Objective* objective_;
    PlannerConfig config_;
    CollisionContext ctx_;
    Rng rng_;
    std::unique_ptr<ApproxGraph> graph_;

    std::vector<double> hCon_;
    std::vector<double> hExp_;

    LexQueue<2> reverseQueue_;  // vertex queue
    LexQueue<3> forwardQueue_;  // edge queue
    std::unordered_map<StateId, std::unordered_set<StateId>> qfBySource_;
    std::unordered_map<StateId, std::unordered_set<StateId>> qfByTarget_;

    double currentCost_ = kInf;
    std::size_t batchCount_ = 0;
    bool saturated_ = false;
    std::uint64_t seed_;
    RunRecord record_;
};

}  // namespace plan
