#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plan/kdtree.hpp"
#include "plan/objective.hpp"
#include "plan/rng.hpp"
#include "plan/space.hpp"
#include "plan/world.hpp"

namespace plan {

enum class ConnectionStrategy { MutualKNearest, RDisc };

struct ApproxConfig {
    ConnectionStrategy strategy = ConnectionStrategy::MutualKNearest;
    double eta = 1.001;
    unsigned batchSize = 100;
};

/// PRM*-scaled connection radius; natural log, q >= 2.
double rggRadius(std::size_t q, unsigned dimension, double eta, double measureMin,
                 double unitBallMeasure);

/// PRM*-scaled neighbor count, ceil of eta * e * (1 + 1/n) * log(q); q >= 2.
unsigned rggK(std::size_t q, unsigned dimension, double eta);

/// The increasingly dense edge-implicit RGG approximation shared by AIT* and
/// EIT*: sampled states, connection strategy, blacklist/whitelist bookkeeping,
/// cached edge costs, and the forward/reverse tree memberships.
///
/// Owned by a single planner run.
class ApproxGraph {
public:
    ApproxGraph(const Space& space, const World& world, const Objective& objective,
                ApproxConfig config, CollisionContext& ctx, Rng& rng);

    /// Registers the start and goal states (assumed valid) and builds the
    /// initial connectivity over just those states.
    void init(const std::vector<double>& start, const std::vector<std::vector<double>>& goals);

    StateId startId() const { return start_; }
    const std::vector<StateId>& goalIds() const { return goals_; }
    bool isGoal(StateId x) const { return goalSet_.count(x) > 0; }

    const State& state(StateId x) const { return states_[x]; }
    bool isActive(StateId x) const { return active_[x]; }
    std::size_t stateCount() const { return states_.size(); }
    std::size_t activeCount() const { return activeCount_; }
    std::vector<StateId> activeStates() const;

    // A priori heuristics anchored at this problem's start and goals.
    double gHat(StateId x) const;  // admissible cost-to-come heuristic
    double hHat(StateId x) const;  // admissible cost-to-go, min over goals
    double fHat(StateId x) const { return gHat(x) + hHat(x); }
    double dBar(StateId x) const;  // effort-to-start
    double cHat(StateId a, StateId b) const;
    double cBar(StateId a, StateId b);
    double eBar(StateId a, StateId b) const;

    /// Geometric RGG neighbors of x plus forward-tree parent and children,
    /// minus blacklisted pairs. Sorted by id.
    std::vector<StateId> neighbors(StateId x) const;

    /// One outgoing edge candidate per neighbor.
    std::vector<std::pair<StateId, StateId>> expand(StateId x) const;

    /// Samples exactly m new valid states (informed when possible) and
    /// refreshes the connectivity structures. Returns the number added, which
    /// is less than m only when the informed set is degenerate.
    std::size_t addBatch(unsigned m, double currentCost);

    struct PruneCounts {
        std::size_t samples = 0;
        std::size_t forwardVertices = 0;
        std::size_t forwardEdges = 0;
    };

    /// Removes samples and forward-tree members with fHat > currentCost.
    /// Start and goals are never pruned. Clears the reverse tree.
    PruneCounts prune(double currentCost);

    // -- Edge validity and cost, cached --------------------------------------

    void blacklist(StateId s, StateId t);
    bool isBlacklisted(StateId s, StateId t) const {
        return blacklist_.count(edgeKey(s, t)) > 0;
    }
    bool isWhitelisted(StateId s, StateId t) const {
        return whitelist_.count(undirectedKey(s, t)) > 0;
    }
    std::size_t blacklistSize() const { return blacklist_.size() / 2; }

    /// Dense validation with whitelist/blacklist short-circuit. An invalid
    /// result records the symmetric blacklist pair.
    bool validateEdgeDense(StateId s, StateId t);

    /// True edge cost, evaluated once per validated edge and cached.
    double trueCost(StateId s, StateId t);

    // -- Forward tree ---------------------------------------------------------

    bool inForwardTree(StateId x) const { return fwdInTree_[x]; }
    StateId forwardParent(StateId x) const { return fwdParent_[x]; }
    const std::vector<StateId>& forwardChildren(StateId x) const { return fwdChildren_[x]; }
    double gF(StateId x) const { return gF_[x]; }
    bool hasForwardEdge(StateId s, StateId t) const {
        return fwdInTree_[t] && fwdParent_[t] == s;
    }
    std::size_t forwardEdgeCount() const;

    /// Adds or rewires the forward edge (s, t) and sets gF(t). Returns the
    /// set of descendants of t (excluding t) whose gF changed through cost
    /// propagation, so callers can refresh queue keys.
    std::vector<StateId> setForwardEdge(StateId s, StateId t, double gT);

    // -- Reverse tree ---------------------------------------------------------

    bool inReverseTree(StateId x) const { return revInTree_[x]; }
    StateId reverseParent(StateId x) const { return revParent_[x]; }
    const std::vector<StateId>& reverseChildren(StateId x) const { return revChildren_[x]; }
    bool hasReverseEdge(StateId parent, StateId child) const {
        return revInTree_[child] && revParent_[child] == parent;
    }

    void setReverseParent(StateId parent, StateId child);
    void detachReverse(StateId child);
    void resetReverseTree();  // keeps goals as roots

    // -- Connectivity parameters ---------------------------------------------

    unsigned currentK() const { return currentK_; }
    double currentRadius() const { return currentRadius_; }

    const Space& space() const { return *space_; }
    const World& world() const { return *world_; }
    const Objective& objective() const { return *objective_; }
    CollisionContext& collisionContext() { return *ctx_; }

private:
    StateId addState(std::vector<double> coords);
    void rebuildConnectivity(double currentCost);
    void attachForward(StateId s, StateId t);
    void detachForward(StateId t);

    const Space* space_;
    const World* world_;
    const Objective* objective_;
    ApproxConfig config_;
    CollisionContext* ctx_;
    Rng* rng_;

    std::vector<State> states_;
    std::vector<bool> active_;
    std::size_t activeCount_ = 0;

    StateId start_ = kNoState;
    std::vector<StateId> goals_;
    std::unordered_set<StateId> goalSet_;

    std::unordered_set<std::uint64_t> blacklist_;  // directed, stored symmetrically
    std::unordered_set<std::uint64_t> whitelist_;  // undirected
    std::unordered_map<std::uint64_t, double> costCache_;
    std::unordered_map<std::uint64_t, double> cBarCache_;

    // Geometric neighbor lists for the current batch epoch, sorted by id.
    std::vector<std::vector<StateId>> geomNeighbors_;
    KdTree index_;
    unsigned currentK_ = 0;
    double currentRadius_ = 0.0;

    std::vector<bool> fwdInTree_;
    std::vector<StateId> fwdParent_;
    std::vector<std::vector<StateId>> fwdChildren_;
    std::vector<double> gF_;

    std::vector<bool> revInTree_;
    std::vector<StateId> revParent_;
    std::vector<std::vector<StateId>> revChildren_;
};

}  // namespace plan
