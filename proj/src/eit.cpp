#include "plan/eit.hpp"

#include <algorithm>
#include <cmath>

namespace plan {

EitPlanner::EitPlanner(const Space& space, const World& world, const Objective& objective,
                       const std::vector<double>& start,
                       const std::vector<std::vector<double>>& goals, PlannerConfig config,
                       std::uint64_t seed)
    : space_(&space),
      world_(&world),
      objective_(&objective),
      config_(config),
      rng_(seed) {
    record_.seed = seed;
    record_.plannerId = "eit";
    w_ = config_.pinnedInflation >= 1.0 ? config_.pinnedInflation : kInf;
    d_ = std::max(1u, config_.initialSparseChecks);
    dTrace_.push_back(d_);
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
    restartReverseSearch();
    qfExpand(graph_->startId());
}

double EitPlanner::mulW(double w, double x) {
    if (std::isinf(w)) return x > 0.0 ? kInf : 0.0;
    return w * x;
}

double EitPlanner::sHat(StateId s, StateId t) const {
    return graph_->gF(s) + graph_->cHat(s, t) + hHat_[t];
}

double EitPlanner::sBar(StateId s, StateId t) {
    return graph_->gF(s) + graph_->cBar(s, t) + hBar_[t];
}

double EitPlanner::rBar(StateId s, StateId t) const {
    return graph_->eBar(s, t) + eTogo_[t];
}

std::array<double, 2> EitPlanner::reverseKey(StateId s, StateId t) const {
    return {hHat_[s] + graph_->cHat(s, t) + graph_->gHat(t),
            eTogo_[s] + graph_->eBar(s, t) + graph_->dBar(t)};
}

// -- Forward queue ------------------------------------------------------------

void EitPlanner::qfInsert(StateId s, StateId t) {
    const auto key = edgeKey(s, t);
    auto it = fwdKeys_.find(key);
    if (it != fwdKeys_.end()) {
        bySHat_.erase({it->second.sHat, s, t});
        bySBar_.erase({it->second.sBar, s, t});
        byEffort_.erase({it->second.rBar, it->second.sHat, s, t});
    } else {
        qfBySource_[s].insert(t);
        qfByTarget_[t].insert(s);
        if (closed_[t]) ++closedTargets_;
        if (graph_->inReverseTree(t)) ++revTreeTargets_;
    }
    FwdKeys k{sHat(s, t), sBar(s, t), rBar(s, t)};
    fwdKeys_[key] = k;
    bySHat_.insert({k.sHat, s, t});
    bySBar_.insert({k.sBar, s, t});
    byEffort_.insert({k.rBar, k.sHat, s, t});
}

void EitPlanner::qfErase(StateId s, StateId t) {
    const auto key = edgeKey(s, t);
    auto it = fwdKeys_.find(key);
    if (it == fwdKeys_.end()) return;
    bySHat_.erase({it->second.sHat, s, t});
    bySBar_.erase({it->second.sBar, s, t});
    byEffort_.erase({it->second.rBar, it->second.sHat, s, t});
    fwdKeys_.erase(it);
    qfBySource_[s].erase(t);
    qfByTarget_[t].erase(s);
    if (closed_[t]) --closedTargets_;
    if (graph_->inReverseTree(t)) --revTreeTargets_;
}

void EitPlanner::qfExpand(StateId x) {
    for (const auto& [s, t] : graph_->expand(x)) qfInsert(s, t);
}

void EitPlanner::qfRefreshTarget(StateId t) {
    auto it = qfByTarget_.find(t);
    if (it == qfByTarget_.end()) return;
    const auto sources = it->second;
    for (StateId s : sources) qfInsert(s, t);
}

void EitPlanner::qfRefreshSource(StateId s) {
    auto it = qfBySource_.find(s);
    if (it == qfBySource_.end()) return;
    const auto targets = it->second;
    for (StateId t : targets) qfInsert(s, t);
}

void EitPlanner::qfClear() {
    fwdKeys_.clear();
    bySHat_.clear();
    bySBar_.clear();
    byEffort_.clear();
    qfBySource_.clear();
    qfByTarget_.clear();
    closedTargets_ = 0;
    revTreeTargets_ = 0;
}

double EitPlanner::minSHat() const {
    return bySHat_.empty() ? kInf : std::get<0>(*bySHat_.begin());
}

std::pair<StateId, StateId> EitPlanner::peekBestForwardEdge() const {
    const auto& [minSBarVal, sbS, sbT] = *bySBar_.begin();
    const auto& [minSHatVal, shS, shT] = *bySHat_.begin();
    const double sBarBound = mulW(w_, minSBarVal);
    const double sHatBound = mulW(w_, minSHatVal);
    // Minimum-effort edge within the suboptimality-filtered queue.
    for (const auto& [r, sh, s, t] : byEffort_) {
        const double sb = fwdKeys_.at(edgeKey(s, t)).sBar;
        if (sb > sBarBound) continue;
        if (sb <= sHatBound) return {s, t};
        break;  // filtered minimum fails the bound; fall through
    }
    if (minSBarVal <= sHatBound) return {sbS, sbT};
    return {shS, shT};
}

// -- Reverse queue ------------------------------------------------------------

void EitPlanner::qrInsert(StateId s, StateId t) {
    reverseQueue_.insertOrUpdate(s, t, reverseKey(s, t));
    qrBySource_[s].insert(t);
}

void EitPlanner::qrRefreshSource(StateId s) {
    auto it = qrBySource_.find(s);
    if (it == qrBySource_.end()) return;
    for (StateId t : it->second) reverseQueue_.insertOrUpdate(s, t, reverseKey(s, t));
}

void EitPlanner::onClosed(StateId x) {
    if (closed_[x]) return;
    closed_[x] = true;
    auto it = qfByTarget_.find(x);
    if (it != qfByTarget_.end()) closedTargets_ += it->second.size();
}

void EitPlanner::onEnteredReverseTree(StateId x) {
    auto it = qfByTarget_.find(x);
    if (it != qfByTarget_.end()) revTreeTargets_ += it->second.size();
}

// -- Search iterations --------------------------------------------------------

bool EitPlanner::reverseSuspended() {
    if (reverseQueue_.empty() || fwdKeys_.empty()) return true;
    if (closedTargets_ == fwdKeys_.size()) return true;
    if (std::isinf(w_) && revTreeTargets_ > 0) return true;
    const auto& rev = reverseQueue_.peekMin();
    const auto& [bestSHat, fs, ft] = *bySHat_.begin();
    (void)fs;
    return rev.key[0] >= bestSHat && closed_[ft];
}

void EitPlanner::iterateReverse() {
    const auto e = reverseQueue_.popMin();
    const StateId s = e.source;
    const StateId t = e.target;
    qrBySource_[s].erase(t);
    onClosed(s);

    const auto collision =
        world_->firstSparseCollision(graph_->state(s), graph_->state(t), d_, ctx_);
    if (collision) {
        graph_->blacklist(s, t);
        witnesses_.push_back({s, t, collision->coords});
        reverseQueue_.remove(t, s);
        if (auto it = qrBySource_.find(t); it != qrBySource_.end()) it->second.erase(s);
        qfErase(s, t);
        qfErase(t, s);
        return;
    }

    bool changed = false;
    const double hb = hBar_[s] + graph_->cBar(t, s);
    if (hb < hBar_[t]) {
        hBar_[t] = hb;
        changed = true;
    }
    const double et = eTogo_[s] + graph_->eBar(t, s);
    if (et < eTogo_[t]) {
        eTogo_[t] = et;
        changed = true;
    }
    const double ha = hHat_[s] + graph_->cHat(t, s);
    if (hHat_[t] > ha) {
        hHat_[t] = ha;
        changed = true;
        const bool fresh = !graph_->inReverseTree(t);
        graph_->setReverseParent(s, t);
        if (fresh) onEnteredReverseTree(t);
        for (const auto& [a, b] : graph_->expand(t)) qrInsert(a, b);
    }
    // The inadmissible estimate never undercuts the admissible one.
    if (hBar_[t] < hHat_[t]) {
        hBar_[t] = hHat_[t];
        changed = true;
    }
    if (changed) {
        qfRefreshTarget(t);
        qrRefreshSource(t);
    }
}

void EitPlanner::iterateForward() {
    const auto [s, t] = peekBestForwardEdge();
    qfErase(s, t);

    if (graph_->hasForwardEdge(s, t)) {
        qfExpand(t);
        return;
    }
    if (graph_->gF(s) + graph_->cHat(s, t) >= graph_->gF(t)) return;

    if (!graph_->validateEdgeDense(s, t)) {
        qfErase(t, s);
        reverseQueue_.remove(s, t);
        reverseQueue_.remove(t, s);
        if (auto it = qrBySource_.find(s); it != qrBySource_.end()) it->second.erase(t);
        if (auto it = qrBySource_.find(t); it != qrBySource_.end()) it->second.erase(s);
        if (graph_->hasReverseEdge(s, t) || graph_->hasReverseEdge(t, s)) {
            d_ *= 2;
            dTrace_.push_back(d_);
            restartReverseSearch();
        }
        return;
    }

    const double c = graph_->trueCost(s, t);
    if (graph_->gF(s) + c + hHat_[t] >= currentCost_) return;
    if (graph_->gF(s) + c >= graph_->gF(t)) return;

    auto updated = graph_->setForwardEdge(s, t, graph_->gF(s) + c);
    qfRefreshSource(t);
    for (StateId x : updated) qfRefreshSource(x);
    qfExpand(t);
    updateSolutionCost();
}

void EitPlanner::updateSolutionCost() {
    double best = kInf;
    for (StateId g : graph_->goalIds()) best = std::min(best, graph_->gF(g));
    if (best < currentCost_) {
        currentCost_ = best;
        if (config_.pinnedInflation < 1.0) w_ = 1.0;
        recordEvent();
    }
}

std::vector<std::vector<double>> EitPlanner::solutionPath() const {
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

void EitPlanner::recordEvent() {
    SolutionEvent ev;
    ev.time = ctx_.clock.seconds();
    ev.cost = currentCost_;
    ev.path = solutionPath();
    ev.denseEdgeChecks = ctx_.counters.denseEdgeChecks;
    record_.events.push_back(std::move(ev));
}

void EitPlanner::restartReverseSearch() {
    const std::size_t n = graph_->stateCount();
    hHat_.assign(n, kInf);
    hBar_.assign(n, kInf);
    eTogo_.assign(n, kInf);
    closed_.assign(n, false);
    graph_->resetReverseTree();
    reverseQueue_.clear();
    qrBySource_.clear();
    for (StateId g : graph_->goalIds()) {
        hHat_[g] = 0.0;
        hBar_[g] = 0.0;
        eTogo_[g] = 0.0;
    }
    // Recount suspension bookkeeping against the reset labels and tree, then
    // refresh forward keys that referenced the old labels.
    closedTargets_ = 0;
    revTreeTargets_ = 0;
    for (const auto& [t, sources] : qfByTarget_) {
        if (graph_->inReverseTree(t)) revTreeTargets_ += sources.size();
    }
    std::vector<std::pair<StateId, StateId>> edges;
    edges.reserve(fwdKeys_.size());
    for (const auto& [t, sources] : qfByTarget_) {
        for (StateId s : sources) edges.emplace_back(s, t);
    }
    for (const auto& [s, t] : edges) qfInsert(s, t);
    for (StateId g : graph_->goalIds()) {
        for (const auto& [a, b] : graph_->expand(g)) qrInsert(a, b);
    }
}

void EitPlanner::improveApproximation() {
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
    if (d_ != std::max(1u, config_.initialSparseChecks)) {
        d_ = std::max(1u, config_.initialSparseChecks);
        dTrace_.push_back(d_);
    }
    qfClear();
    qfExpand(graph_->startId());
    restartReverseSearch();
}

void EitPlanner::runReverseToQuiescence() {
    while (!reverseQueue_.empty()) iterateReverse();
}

RunRecord EitPlanner::solve(double budgetSeconds) {
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
        if (!reverseSuspended()) {
            iterateReverse();
        } else if (minSHat() < currentCost_) {
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
