#include "plan/ait.hpp"

#include <algorithm>

namespace plan {

AitPlanner::AitPlanner(const Space& space, const World& world, const Objective& objective,
                       const std::vector<double>& start,
                       const std::vector<std::vector<double>>& goals, PlannerConfig config,
                       std::uint64_t seed)
    : space_(&space),
      world_(&world),
      objective_(&objective),
      config_(config),
      rng_(seed),
      seed_(seed) {
    record_.seed = seed;
    record_.plannerId = "ait";
    ApproxConfig ac;
    ac.strategy = config_.strategy;
    ac.eta = config_.eta;
    ac.batchSize = config_.batchSize;
    graph_ = std::make_unique<ApproxGraph>(space, world, objective, ac, ctx_, rng_);
    if (!world.isValidState(start, ctx_)) {
        record_.status = RunStatus::InvalidProblem;
        record_.diagnostic = "start state is in collision";
        return;
    }
    for (const auto& g : goals) {
        if (!world.isValidState(g, ctx_)) {
            record_.status = RunStatus::InvalidProblem;
            record_.diagnostic = "goal state is in collision";
            return;
        }
    }
    graph_->init(start, goals);
    hCon_.assign(graph_->stateCount(), kInf);
    hExp_.assign(graph_->stateCount(), kInf);
    reinitializeSearches();
}

std::array<double, 2> AitPlanner::reverseKey(StateId x) const {
    const double h = std::min(hCon_[x], hExp_[x]);
    return {h + graph_->gHat(x), h};
}

std::array<double, 3> AitPlanner::forwardKey(StateId s, StateId t) const {
    const double g = graph_->gF(s);
    const double c = graph_->cHat(s, t);
    return {g + c + hCon_[t], g + c, g};
}

void AitPlanner::qfInsert(StateId s, StateId t) {
    forwardQueue_.insertOrUpdate(s, t, forwardKey(s, t));
    qfBySource_[s].insert(t);
    qfByTarget_[t].insert(s);
}

void AitPlanner::qfErase(StateId s, StateId t) {
    if (!forwardQueue_.remove(s, t)) return;
    qfBySource_[s].erase(t);
    qfByTarget_[t].erase(s);
}

void AitPlanner::qfExpand(StateId x) {
    for (const auto& [s, t] : graph_->expand(x)) qfInsert(s, t);
}

void AitPlanner::qfRefreshTarget(StateId t) {
    auto it = qfByTarget_.find(t);
    if (it == qfByTarget_.end()) return;
    for (StateId s : it->second) forwardQueue_.insertOrUpdate(s, t, forwardKey(s, t));
}

void AitPlanner::qfRefreshSource(StateId s) {
    auto it = qfBySource_.find(s);
    if (it == qfBySource_.end()) return;
    for (StateId t : it->second) forwardQueue_.insertOrUpdate(s, t, forwardKey(s, t));
}

bool AitPlanner::inReverseBranch(StateId root, StateId x) const {
    for (StateId v = x; v != kNoState; v = graph_->reverseParent(v)) {
        if (v == root) return true;
        if (graph_->isGoal(v)) break;
    }
    return false;
}

void AitPlanner::updateState(StateId x) {
    if (x == graph_->startId() || graph_->isGoal(x)) return;
    double best = kInf;
    StateId bestParent = kNoState;
    for (StateId y : graph_->neighbors(x)) {
        const double v = hExp_[y] + graph_->cHat(x, y);
        // A descendant of x cannot become its parent: with zero-cost edge
        // heuristics the plain argmin can otherwise close a cycle.
        if (v < best && !inReverseBranch(x, y)) {
            best = v;
            bestParent = y;
        }
    }
    if (bestParent != kNoState) {
        graph_->setReverseParent(bestParent, x);
    } else if (graph_->inReverseTree(x)) {
        graph_->detachReverse(x);
    }
    const double old = hCon_[x];
    hCon_[x] = best;
    if (hCon_[x] != hExp_[x]) {
        reverseQueue_.insertOrUpdate(x, reverseKey(x));
    } else {
        reverseQueue_.remove(x);
    }
    if (hCon_[x] != old) qfRefreshTarget(x);
}

void AitPlanner::iterateReverse() {
    const StateId x = reverseQueue_.popMin().source;
    if (hCon_[x] < hExp_[x]) {
        hExp_[x] = hCon_[x];
    } else {
        hExp_[x] = kInf;
        updateState(x);
    }
    for (StateId y : graph_->neighbors(x)) updateState(y);
}

void AitPlanner::collectBranch(StateId x, std::vector<StateId>& branch) {
    branch.push_back(x);
    for (StateId c : graph_->reverseChildren(x)) collectBranch(c, branch);
}

void AitPlanner::invalidateReverseBranch(StateId x) {
    if (graph_->isGoal(x)) return;
    // Two phases: first reset the entire branch (labels, tree edges, queue
    // membership) so no stale intra-branch value can be adopted, then let
    // update_state requeue each affected state against the intact remainder.
    std::vector<StateId> branch;
    collectBranch(x, branch);
    for (StateId v : branch) {
        hCon_[v] = kInf;
        hExp_[v] = kInf;
        graph_->detachReverse(v);
        reverseQueue_.remove(v);
        qfRefreshTarget(v);
    }
    for (StateId v : branch) updateState(v);
}

bool AitPlanner::continueReverse() const {
    if (reverseQueue_.empty() || forwardQueue_.empty()) return false;
    const auto& fwd = forwardQueue_.peekMin();
    const auto& rev = reverseQueue_.peekMin();
    const bool primary = rev.key[0] < fwd.key[0] || !isConsistent(fwd.target);
    if (!primary) return false;
    // Suspend anyway once every forward-queue target is consistent with a
    // reverse key no worse than the reverse queue's minimum: further reverse
    // work cannot change any forward key.
    bool allSettled = true;
    const auto& minRev = rev.key;
    forwardQueue_.scan([&](const LexQueue<3>::Entry& e) {
        const StateId t = e.target;
        if (!isConsistent(t)) {
            allSettled = false;
            return false;
        }
        const auto k = reverseKey(t);
        if (k[0] > minRev[0] || (k[0] == minRev[0] && k[1] > minRev[1])) {
            allSettled = false;
            return false;
        }
        return true;
    });
    return !allSettled;
}

bool AitPlanner::continueForward() const {
    return !forwardQueue_.empty() && forwardQueue_.peekMin().key[0] < currentCost_;
}

void AitPlanner::iterateForward() {
    const auto e = forwardQueue_.popMin();
    const StateId s = e.source;
    const StateId t = e.target;
    qfBySource_[s].erase(t);
    qfByTarget_[t].erase(s);

    if (graph_->hasForwardEdge(s, t)) {
        qfExpand(t);
        return;
    }
    if (graph_->gF(s) + graph_->cHat(s, t) >= graph_->gF(t)) return;

    if (!graph_->validateEdgeDense(s, t)) {
        qfErase(t, s);
        // Repair the reverse tree if the edge carried it, in either
        // orientation.
        if (graph_->hasReverseEdge(t, s)) {
            invalidateReverseBranch(s);
        } else if (graph_->hasReverseEdge(s, t)) {
            invalidateReverseBranch(t);
        }
        return;
    }

    const double c = graph_->trueCost(s, t);
    if (graph_->gF(s) + c + hCon_[t] >= currentCost_) return;
    if (graph_->gF(s) + c >= graph_->gF(t)) return;

    // Rewiring t away from its old parent drops that edge from the augmented
    // adjacency; if the reverse tree ran over it, repair the affected branch.
    const StateId oldParent =
        graph_->inForwardTree(t) ? graph_->forwardParent(t) : kNoState;
    auto updated = graph_->setForwardEdge(s, t, graph_->gF(s) + c);
    if (oldParent != kNoState && oldParent != s) {
        if (graph_->hasReverseEdge(oldParent, t)) {
            invalidateReverseBranch(t);
        } else if (graph_->hasReverseEdge(t, oldParent)) {
            invalidateReverseBranch(oldParent);
        }
    }
    qfRefreshSource(t);
    for (StateId d : updated) qfRefreshSource(d);
    qfExpand(t);
    updateSolutionCost();
}

void AitPlanner::updateSolutionCost() {
    double best = kInf;
    for (StateId g : graph_->goalIds()) best = std::min(best, graph_->gF(g));
    if (best < currentCost_) {
        currentCost_ = best;
        recordEvent();
    }
}

std::vector<std::vector<double>> AitPlanner::solutionPath() const {
    StateId bestGoal = kNoState;
    double best = kInf;
    for (StateId g : graph_->goalIds()) {
        if (graph_->inForwardTree(g) && graph_->gF(g) < best) {
            best = graph_->gF(g);
            bestGoal = g;
        }
    }
    if (bestGoal == kNoState) return {};
    std::vector<std::vector<double>> path;
    for (StateId x = bestGoal;; x = graph_->forwardParent(x)) {
        path.push_back(graph_->state(x).coords);
        if (x == graph_->startId()) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void AitPlanner::recordEvent() {
    SolutionEvent ev;
    ev.time = ctx_.clock.seconds();
    ev.cost = currentCost_;
    ev.path = solutionPath();
    ev.denseEdgeChecks = ctx_.counters.denseEdgeChecks;
    record_.events.push_back(std::move(ev));
}

void AitPlanner::reinitializeSearches() {
    hCon_.assign(graph_->stateCount(), kInf);
    hExp_.assign(graph_->stateCount(), kInf);
    graph_->resetReverseTree();
    reverseQueue_.clear();
    forwardQueue_.clear();
    qfBySource_.clear();
    qfByTarget_.clear();
    for (StateId g : graph_->goalIds()) {
        hCon_[g] = 0.0;
        reverseQueue_.insertOrUpdate(g, reverseKey(g));
    }
    qfExpand(graph_->startId());
}

void AitPlanner::improveApproximation() {
    if (config_.freezeApproximation && batchCount_ >= 1) {
        saturated_ = true;
        return;
    }
    if (std::isfinite(currentCost_)) graph_->prune(currentCost_);
    const unsigned m =
        (batchCount_ == 0 && config_.initialBatch > 0) ? config_.initialBatch : config_.batchSize;
    const std::size_t added = graph_->addBatch(m, currentCost_);
    ++batchCount_;
    if (added < m) {
        saturated_ = true;
        return;
    }
    reinitializeSearches();
}

void AitPlanner::runReverseToQuiescence() {
    while (!reverseQueue_.empty()) iterateReverse();
}

RunRecord AitPlanner::solve(double budgetSeconds) {
    if (record_.status == RunStatus::InvalidProblem) return record_;
    RunStatus status = RunStatus::Timeout;
    while (true) {
        if (ctx_.clock.seconds() >= budgetSeconds) {
            status = RunStatus::Timeout;
            break;
        }
        if (config_.targetCost >= 0.0 && currentCost_ <= config_.targetCost) {
            status = RunStatus::Solved;
            break;
        }
        if (config_.stopAfterFirstSolution && std::isfinite(currentCost_)) {
            status = RunStatus::Solved;
            break;
        }
        ctx_.clock.charge(WorkClock::kPlannerIteration);
        if (continueReverse()) {
            iterateReverse();
        } else if (continueForward()) {
            iterateForward();
        } else {
            improveApproximation();
            if (saturated_) {
                status = RunStatus::Converged;
                break;
            }
        }
    }
    record_.status = status;
    record_.finalCost = currentCost_;
    record_.elapsed = ctx_.clock.seconds();
    record_.counters = ctx_.counters;
    return record_;
}

}  // namespace plan
