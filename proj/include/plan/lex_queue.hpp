#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "plan/types.hpp"

namespace plan {

/// Min-queue over fixed-arity lexicographic keys with deterministic
/// tie-breaking by (source id, target id). Supports insert-or-update,
/// remove-specific, pop-min, peek-min and membership. Vertex-keyed queues use
/// target = kNoState.
template <std::size_t Arity>
class LexQueue {
public:
    using Key = std::array<double, Arity>;

    struct Entry {
        Key key;
        StateId source;
        StateId target;
    };

    struct Less {
        bool operator()(const Entry& a, const Entry& b) const {
            for (std::size_t i = 0; i < Arity; ++i) {
                if (a.key[i] < b.key[i]) return true;
                if (a.key[i] > b.key[i]) return false;
            }
            if (a.source != b.source) return a.source < b.source;
            return a.target < b.target;
        }
    };

    bool empty() const { return ordered_.empty(); }
    std::size_t size() const { return ordered_.size(); }

    bool contains(StateId s, StateId t = kNoState) const {
        return index_.count(edgeKey(s, t)) > 0;
    }

    const Key* keyOf(StateId s, StateId t = kNoState) const {
        auto it = index_.find(edgeKey(s, t));
        return it == index_.end() ? nullptr : &it->second->key;
    }

    void insertOrUpdate(StateId s, const Key& key) { insertOrUpdate(s, kNoState, key); }

    void insertOrUpdate(StateId s, StateId t, const Key& key) {
        auto it = index_.find(edgeKey(s, t));
        if (it != index_.end()) ordered_.erase(it->second);
        auto [pos, inserted] = ordered_.insert(Entry{key, s, t});
        (void)inserted;
        index_[edgeKey(s, t)] = pos;
    }

    bool remove(StateId s, StateId t = kNoState) {
        auto it = index_.find(edgeKey(s, t));
        if (it == index_.end()) return false;
        ordered_.erase(it->second);
        index_.erase(it);
        return true;
    }

    const Entry& peekMin() const {
        if (ordered_.empty()) throw std::logic_error("LexQueue: peek on empty queue");
        return *ordered_.begin();
    }

    Entry popMin() {
        if (ordered_.empty()) throw std::logic_error("LexQueue: pop on empty queue");
        Entry e = *ordered_.begin();
        ordered_.erase(ordered_.begin());
        index_.erase(edgeKey(e.source, e.target));
        return e;
    }

    void clear() {
        ordered_.clear();
        index_.clear();
    }

    /// In-order traversal; fn returning false stops the walk.
    template <typename Fn>
    void scan(Fn&& fn) const {
        for (const auto& e : ordered_) {
            if (!fn(e)) break;
        }
    }

    std::vector<Entry> entries() const { return {ordered_.begin(), ordered_.end()}; }

private:
    std::set<Entry, Less> ordered_;
    std::unordered_map<std::uint64_t, typename std::set<Entry, Less>::iterator> index_;
};

}  // namespace plan
