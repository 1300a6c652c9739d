#include "plan/rrt_star.hpp"

#include <algorithm>
#include <cmath>

#include "plan/approx.hpp"

namespace plan {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}  // namespace

RrtStarPlanner::RrtStarPlanner(const Space& space, const World& world, const Objective& objective,
                               const std::vector<double>& start,
                               const std::vector<std::vector<double>>& goals,
                               PlannerConfig config, std::uint64_t seed)
    : space_(&space),
      world_(&world),
      objective_(&objective),
      config_(config),
      rng_(seed) {
    record_.seed = seed;
    record_.plannerId = "rrtstar";
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
    startState_ = State{start, 0};
    for (std::size_t i = 0; i < goals.size(); ++i) {
        goalStates_.push_back(State{goals[i], static_cast<StateId>(i + 1)});
        goalVertex_.push_back(kNone);
    }
    coords_.push_back(start);
    g_.push_back(0.0);
    parent_.push_back(kNone);
    children_.emplace_back();
}

std::size_t RrtStarPlanner::nearest(const std::vector<double>& q) const {
    double bestSq = kInf;
    std::size_t best = kNone;
    if (indexed_ > 0) {
        const auto hits = index_.knn(q, 1);
        if (!hits.empty()) {
            best = hits.front();
            bestSq = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double d = q[i] - coords_[best][i];
                bestSq += d * d;
            }
        }
    }
    for (std::size_t v = indexed_; v < coords_.size(); ++v) {
        double sq = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = q[i] - coords_[v][i];
            sq += d * d;
        }
        if (sq < bestSq || (sq == bestSq && v < best)) {
            bestSq = sq;
            best = v;
        }
    }
    return best;
}

std::vector<std::size_t> RrtStarPlanner::near(const std::vector<double>& q, double r) const {
    std::vector<std::size_t> out;
    if (indexed_ > 0) {
        for (StateId id : index_.radius(q, r)) out.push_back(id);
    }
    const double rSq = r * r;
    for (std::size_t v = indexed_; v < coords_.size(); ++v) {
        double sq = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = q[i] - coords_[v][i];
            sq += d * d;
        }
        if (sq <= rSq) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void RrtStarPlanner::maybeRebuildIndex() {
    if (coords_.size() < 2 * indexed_ + 64) return;
    // The index keeps pointers; snapshot the coordinates into storage that
    // stays put while coords_ keeps growing.
    indexSnapshot_ = coords_;
    std::vector<const std::vector<double>*> pts;
    std::vector<StateId> ids;
    pts.reserve(indexSnapshot_.size());
    for (std::size_t v = 0; v < indexSnapshot_.size(); ++v) {
        pts.push_back(&indexSnapshot_[v]);
        ids.push_back(static_cast<StateId>(v));
    }
    index_.build(pts, ids);
    indexed_ = coords_.size();
    ctx_.clock.charge(coords_.size() * WorkClock::kPerSampleIndexing);
}

void RrtStarPlanner::propagate(std::size_t v, double delta) {
    for (std::size_t c : children_[v]) {
        g_[c] -= delta;
        propagate(c, delta);
    }
}

void RrtStarPlanner::updateSolutionCost() {
    double best = kInf;
    for (std::size_t gv : goalVertex_) {
        if (gv != kNone) best = std::min(best, g_[gv]);
    }
    if (best < currentCost_) {
        currentCost_ = best;
        recordEvent();
    }
}

std::vector<std::vector<double>> RrtStarPlanner::solutionPath() const {
    std::size_t bestGoal = kNone;
    double best = kInf;
    for (std::size_t gv : goalVertex_) {
        if (gv != kNone && g_[gv] < best) {
            best = g_[gv];
            bestGoal = gv;
        }
    }
    if (bestGoal == kNone) return {};
    std::vector<std::vector<double>> path;
    for (std::size_t v = bestGoal; v != kNone; v = parent_[v]) path.push_back(coords_[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

void RrtStarPlanner::recordEvent() {
    SolutionEvent ev;
    ev.time = ctx_.clock.seconds();
    ev.cost = currentCost_;
    ev.path = solutionPath();
    ev.denseEdgeChecks = ctx_.counters.denseEdgeChecks;
    record_.events.push_back(std::move(ev));
}

void RrtStarPlanner::iterate() {
    ctx_.clock.charge(WorkClock::kPlannerIteration);

    // Sample: goal bias, then informed once a solution exists.
    std::vector<double> sample;
    if (rng_.uniform01() < config_.rrtGoalBias) {
        sample = goalStates_[goalStates_.size() == 1 ? 0 : rng_.uniformIndex(goalStates_.size())]
                     .coords;
    } else if (std::isfinite(currentCost_) && objective_->informedSamplingApplies()) {
        auto drawn = space_->sampleInformed(startState_, goalStates_, currentCost_, rng_);
        if (!drawn) return;
        sample = std::move(*drawn);
    } else {
        sample = space_->sampleUniform(rng_);
    }

    const std::size_t vNear = nearest(sample);
    State target{sample, kNoState};
    const State from{coords_[vNear], kNoState};
    const double dist = distance(from, target);
    if (dist == 0.0) return;
    State xNew = dist > config_.rrtSteerRange
                     ? interpolate(from, target, config_.rrtSteerRange / dist)
                     : target;
    if (!world_->isValidState(xNew, ctx_)) return;

    // An exact duplicate can only be a goal drawn by the bias; rewiring of the
    // existing goal vertex covers it.
    for (std::size_t i = 0; i < goalStates_.size(); ++i) {
        if (goalVertex_[i] != kNone && goalStates_[i].coords == xNew.coords) return;
    }

    const std::size_t q = coords_.size() + 1;
    double r = config_.rrtSteerRange;
    if (q >= 2) {
        const double measure =
            objective_->informedSamplingApplies()
                ? std::min(1.0, space_->informedMeasure(startState_, goalStates_, currentCost_))
                : 1.0;
        r = std::min(r, rggRadius(q, space_->dimension(), config_.eta, measure,
                                  space_->descriptor().unitBallMeasure));
    }
    auto nbrs = near(xNew.coords, r);
    if (nbrs.empty()) nbrs.push_back(vNear);

    // Lowest-cost valid parent; neighbors visited in ascending optimistic
    // estimate so the search can stop once estimates pass the incumbent.
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(nbrs.size());
    for (std::size_t v : nbrs) {
        const State sv{coords_[v], static_cast<StateId>(v)};
        order.push_back({g_[v] + objective_->admissibleEdgeHeuristic(sv, xNew), v});
    }
    std::sort(order.begin(), order.end());
    double bestG = kInf;
    std::size_t bestParent = kNone;
    for (const auto& [est, v] : order) {
        if (est >= bestG) break;
        const State sv{coords_[v], static_cast<StateId>(v)};
        if (!world_->isValidEdgeDense(sv, xNew, ctx_)) continue;
        const double gc = g_[v] + objective_->trueEdgeCost(sv, xNew, ctx_);
        if (gc < bestG) {
            bestG = gc;
            bestParent = v;
        }
    }
    if (bestParent == kNone) return;

    const std::size_t vNew = coords_.size();
    coords_.push_back(xNew.coords);
    g_.push_back(bestG);
    parent_.push_back(bestParent);
    children_.emplace_back();
    children_[bestParent].push_back(vNew);
    for (std::size_t i = 0; i < goalStates_.size(); ++i) {
        if (goalStates_[i].coords == xNew.coords) goalVertex_[i] = vNew;
    }

    // Rewire the neighborhood through the new vertex.
    for (std::size_t v : nbrs) {
        if (v == bestParent) continue;
        const State sv{coords_[v], static_cast<StateId>(v)};
        if (bestG + objective_->admissibleEdgeHeuristic(xNew, sv) >= g_[v]) continue;
        if (!world_->isValidEdgeDense(xNew, sv, ctx_)) continue;
        const double gc = bestG + objective_->trueEdgeCost(xNew, sv, ctx_);
        if (gc >= g_[v]) continue;
        auto& oldChildren = children_[parent_[v]];
        oldChildren.erase(std::find(oldChildren.begin(), oldChildren.end(), v));
        parent_[v] = vNew;
        children_[vNew].push_back(v);
        const double delta = g_[v] - gc;
        g_[v] = gc;
        propagate(v, delta);
    }

    maybeRebuildIndex();
    updateSolutionCost();
}

RunRecord RrtStarPlanner::solve(double budgetSeconds) {
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
        iterate();
    }
    record_.status = status;
    record_.finalCost = currentCost_;
    record_.elapsed = ctx_.clock.seconds();
    record_.counters = ctx_.counters;
    return record_;
}

}  // namespace plan
