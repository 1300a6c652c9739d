#include "plan/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plan {

namespace {
constexpr int kMaxDrawsPerSample = 1000000;

void eraseFromSorted(std::vector<StateId>& v, StateId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

void insertIntoSorted(std::vector<StateId>& v, StateId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}
}  // namespace

double rggRadius(std::size_t q, unsigned dimension, double eta, double measureMin,
                 double unitBallMeasure) {
    if (q < 2) throw std::invalid_argument("rggRadius: q must be >= 2");
    const double n = static_cast<double>(dimension);
    const double qd = static_cast<double>(q);
    return 2.0 * eta * std::pow(1.0 + 1.0 / n, 1.0 / n) *
           std::pow(measureMin / unitBallMeasure, 1.0 / n) * std::pow(std::log(qd) / qd, 1.0 / n);
}

unsigned rggK(std::size_t q, unsigned dimension, double eta) {
    if (q < 2) throw std::invalid_argument("rggK: q must be >= 2");
    const double n = static_cast<double>(dimension);
    const double value = eta * M_E * (1.0 + 1.0 / n) * std::log(static_cast<double>(q));
    return static_cast<unsigned>(std::ceil(value));
}

ApproxGraph::ApproxGraph(const Space& space, const World& world, const Objective& objective,
                         ApproxConfig config, CollisionContext& ctx, Rng& rng)
    : space_(&space), world_(&world), objective_(&objective), config_(config), ctx_(&ctx),
      rng_(&rng) {}

StateId ApproxGraph::addState(std::vector<double> coords) {
    const StateId id = static_cast<StateId>(states_.size());
    states_.push_back(State{std::move(coords), id});
    active_.push_back(true);
    ++activeCount_;
    geomNeighbors_.emplace_back();
    fwdInTree_.push_back(false);
    fwdParent_.push_back(kNoState);
    fwdChildren_.emplace_back();
    gF_.push_back(kInf);
    revInTree_.push_back(false);
    revParent_.push_back(kNoState);
    revChildren_.emplace_back();
    return id;
}

void ApproxGraph::init(const std::vector<double>& start,
                       const std::vector<std::vector<double>>& goals) {
    start_ = addState(start);
    for (const auto& g : goals) {
        const StateId id = addState(g);
        goals_.push_back(id);
        goalSet_.insert(id);
    }
    revInTree_[start_] = false;
    for (StateId g : goals_) revInTree_[g] = true;
    fwdInTree_[start_] = true;
    gF_[start_] = 0.0;
    rebuildConnectivity(kInf);
}

std::vector<StateId> ApproxGraph::activeStates() const {
    std::vector<StateId> out;
    out.reserve(activeCount_);
    for (StateId i = 0; i < states_.size(); ++i) {
        if (active_[i]) out.push_back(i);
    }
    return out;
}

double ApproxGraph::gHat(StateId x) const {
    return objective_->admissibleEdgeHeuristic(states_[start_], states_[x]);
}

double ApproxGraph::hHat(StateId x) const {
    double best = kInf;
    for (StateId g : goals_) {
        best = std::min(best, objective_->admissibleEdgeHeuristic(states_[x], states_[g]));
    }
    return best;
}

double ApproxGraph::dBar(StateId x) const {
    return objective_->effortEdgeHeuristic(states_[x], states_[start_]);
}

double ApproxGraph::cHat(StateId a, StateId b) const {
    return objective_->admissibleEdgeHeuristic(states_[a], states_[b]);
}

double ApproxGraph::cBar(StateId a, StateId b) {
    const auto key = undirectedKey(a, b);
    auto it = cBarCache_.find(key);
    if (it != cBarCache_.end()) return it->second;
    const double value = objective_->inadmissibleEdgeHeuristic(states_[a], states_[b], *ctx_);
    cBarCache_.emplace(key, value);
    return value;
}

double ApproxGraph::eBar(StateId a, StateId b) const {
    return objective_->effortEdgeHeuristic(states_[a], states_[b]);
}

std::vector<StateId> ApproxGraph::neighbors(StateId x) const {
    std::vector<StateId> out = geomNeighbors_[x];
    if (fwdInTree_[x] && fwdParent_[x] != kNoState) insertIntoSorted(out, fwdParent_[x]);
    for (StateId c : fwdChildren_[x]) insertIntoSorted(out, c);
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](StateId y) {
                                 return !active_[y] || isBlacklisted(x, y);
                             }),
              out.end());
    return out;
}

std::vector<std::pair<StateId, StateId>> ApproxGraph::expand(StateId x) const {
    std::vector<std::pair<StateId, StateId>> out;
    for (StateId y : neighbors(x)) out.emplace_back(x, y);
    return out;
}

void ApproxGraph::rebuildConnectivity(double currentCost) {
    std::vector<const std::vector<double>*> points;
    std::vector<StateId> ids;
    points.reserve(activeCount_);
    ids.reserve(activeCount_);
    for (StateId i = 0; i < states_.size(); ++i) {
        if (!active_[i]) continue;
        points.push_back(&states_[i].coords);
        ids.push_back(i);
    }
    index_.build(points, ids);
    ctx_->clock.charge(activeCount_ * WorkClock::kPerSampleIndexing);

    const std::size_t q = activeCount_;
    for (auto& nb : geomNeighbors_) nb.clear();
    if (q < 2) return;

    if (config_.strategy == ConnectionStrategy::MutualKNearest) {
        currentK_ = rggK(q, space_->dimension(), config_.eta);
        std::vector<std::vector<StateId>> knn(states_.size());
        for (StateId id : ids) {
            knn[id] = index_.knn(states_[id].coords, currentK_, id);
            std::sort(knn[id].begin(), knn[id].end());
        }
        for (StateId id : ids) {
            for (StateId y : knn[id]) {
                if (std::binary_search(knn[y].begin(), knn[y].end(), id)) {
                    geomNeighbors_[id].push_back(y);
                }
            }
        }
    } else {
        double measure = space_->descriptor().lebesgueMeasure;
        if (objective_->informedSamplingApplies() && std::isfinite(currentCost)) {
            std::vector<State> goalStates;
            for (StateId g : goals_) goalStates.push_back(states_[g]);
            measure = space_->informedMeasure(states_[start_], goalStates, currentCost);
        }
        currentRadius_ = rggRadius(q, space_->dimension(), config_.eta,
                                   std::min(space_->descriptor().lebesgueMeasure, measure),
                                   space_->descriptor().unitBallMeasure);
        for (StateId id : ids) {
            geomNeighbors_[id] = index_.radius(states_[id].coords, currentRadius_, id);
            std::sort(geomNeighbors_[id].begin(), geomNeighbors_[id].end());
        }
    }
}

std::size_t ApproxGraph::addBatch(unsigned m, double currentCost) {
    std::vector<State> goalStates;
    for (StateId g : goals_) goalStates.push_back(states_[g]);

    const bool informed = objective_->informedSamplingApplies() && std::isfinite(currentCost);
    std::vector<StateId> added;
    for (unsigned accepted = 0; accepted < m; ++accepted) {
        bool got = false;
        for (int draws = 0; draws < kMaxDrawsPerSample; ++draws) {
            std::vector<double> coords;
            if (informed) {
                auto x = space_->sampleInformed(states_[start_], goalStates, currentCost, *rng_);
                if (!x) {
                    // Degenerate informed set: no state can improve the
                    // solution; keep previous samples.
                    rebuildConnectivity(currentCost);
                    return added.size();
                }
                coords = std::move(*x);
            } else {
                coords = space_->sampleUniform(*rng_);
            }
            if (!world_->isValidState(coords, *ctx_)) continue;
            // Duplicate states break cost positivity; reject exact matches.
            // (Linear scan: the index must not be queried mid-batch, its
            // pointers go stale as states are appended.)
            bool duplicate = false;
            for (const auto& s : states_) {
                if (s.coords == coords) {
                    duplicate = true;
                    break;
                }
            }
            if (duplicate) continue;
            added.push_back(addState(std::move(coords)));
            got = true;
            break;
        }
        if (!got) {
            throw std::runtime_error(
                "addBatch: rejection sampling exceeded draw budget; world is nearly fully "
                "blocked");
        }
    }
    rebuildConnectivity(currentCost);
    return added.size();
}

ApproxGraph::PruneCounts ApproxGraph::prune(double currentCost) {
    PruneCounts counts;
    if (!std::isfinite(currentCost)) return counts;

    std::vector<bool> keep(states_.size(), false);
    for (StateId i = 0; i < states_.size(); ++i) {
        if (!active_[i]) continue;
        keep[i] = fHat(i) <= currentCost || i == start_ || goalSet_.count(i) > 0;
    }

    // The forward tree must stay functional: a kept vertex below a pruned one
    // is detached and reverts to a plain sample.
    std::vector<StateId> stack{start_};
    std::vector<bool> reachable(states_.size(), false);
    reachable[start_] = true;
    while (!stack.empty()) {
        const StateId v = stack.back();
        stack.pop_back();
        for (StateId c : fwdChildren_[v]) {
            if (keep[c]) {
                reachable[c] = true;
                stack.push_back(c);
            }
        }
    }

    for (StateId i = 0; i < states_.size(); ++i) {
        if (!active_[i]) continue;
        if (fwdInTree_[i] && i != start_ && !reachable[i]) {
            ++counts.forwardEdges;
            ++counts.forwardVertices;
            detachForward(i);
            fwdInTree_[i] = false;
            gF_[i] = kInf;
        }
        if (!keep[i]) {
            ++counts.samples;
            active_[i] = false;
            --activeCount_;
        }
    }
    resetReverseTree();
    return counts;
}

void ApproxGraph::blacklist(StateId s, StateId t) {
    blacklist_.insert(edgeKey(s, t));
    blacklist_.insert(edgeKey(t, s));
}

bool ApproxGraph::validateEdgeDense(StateId s, StateId t) {
    if (isWhitelisted(s, t)) return true;
    if (isBlacklisted(s, t)) return false;
    if (world_->isValidEdgeDense(states_[s], states_[t], *ctx_)) {
        whitelist_.insert(undirectedKey(s, t));
        return true;
    }
    blacklist(s, t);
    return false;
}

double ApproxGraph::trueCost(StateId s, StateId t) {
    const auto key = undirectedKey(s, t);
    auto it = costCache_.find(key);
    if (it != costCache_.end()) return it->second;
    const double cost = objective_->trueEdgeCost(states_[s], states_[t], *ctx_);
    costCache_.emplace(key, cost);
    return cost;
}

std::size_t ApproxGraph::forwardEdgeCount() const {
    std::size_t n = 0;
    for (StateId i = 0; i < states_.size(); ++i) {
        if (fwdInTree_[i] && i != start_ && fwdParent_[i] != kNoState) ++n;
    }
    return n;
}

void ApproxGraph::attachForward(StateId s, StateId t) {
    fwdParent_[t] = s;
    insertIntoSorted(fwdChildren_[s], t);
}

void ApproxGraph::detachForward(StateId t) {
    if (fwdParent_[t] != kNoState) {
        eraseFromSorted(fwdChildren_[fwdParent_[t]], t);
        fwdParent_[t] = kNoState;
    }
}

std::vector<StateId> ApproxGraph::setForwardEdge(StateId s, StateId t, double gT) {
    detachForward(t);
    fwdInTree_[t] = true;
    attachForward(s, t);
    gF_[t] = gT;

    // Rewiring improves the whole subtree; propagate through cached costs so
    // gF telescopes along parent chains.
    std::vector<StateId> updated;
    std::vector<StateId> stack{t};
    while (!stack.empty()) {
        const StateId v = stack.back();
        stack.pop_back();
        for (StateId c : fwdChildren_[v]) {
            gF_[c] = gF_[v] + trueCost(v, c);
            updated.push_back(c);
            stack.push_back(c);
        }
    }
    return updated;
}

void ApproxGraph::setReverseParent(StateId parent, StateId child) {
    if (revInTree_[child] && revParent_[child] != kNoState) {
        eraseFromSorted(revChildren_[revParent_[child]], child);
    }
    revInTree_[child] = true;
    revParent_[child] = parent;
    insertIntoSorted(revChildren_[parent], child);
}

void ApproxGraph::detachReverse(StateId child) {
    if (revParent_[child] != kNoState) {
        eraseFromSorted(revChildren_[revParent_[child]], child);
        revParent_[child] = kNoState;
    }
    if (!goalSet_.count(child)) revInTree_[child] = false;
}

void ApproxGraph::resetReverseTree() {
    for (StateId i = 0; i < states_.size(); ++i) {
        revInTree_[i] = goalSet_.count(i) > 0;
        revParent_[i] = kNoState;
        revChildren_[i].clear();
    }
}

}  // namespace plan
