#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <vector>

#include "plan/types.hpp"

namespace plan {

/// Static kd-tree over a point set, rebuilt per batch. Queries return ids in
/// deterministic order (distance, then id).
class KdTree {
public:
    KdTree() = default;

    void build(const std::vector<const std::vector<double>*>& points,
               const std::vector<StateId>& ids) {
        points_ = points;
        ids_ = ids;
        nodes_.clear();
        std::vector<std::size_t> order(points_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        dimension_ = points_.empty() ? 0 : points_.front()->size();
        if (!order.empty()) root_ = buildRecursive(order.begin(), order.end(), 0);
    }

    std::size_t size() const { return points_.size(); }

    /// k nearest ids to the query point, excluding `exclude`.
    std::vector<StateId> knn(const std::vector<double>& query, std::size_t k,
                             StateId exclude = kNoState) const {
        Best best{k};
        if (root_ >= 0) knnRecursive(root_, query, exclude, best);
        return best.sortedIds();
    }

    std::vector<StateId> radius(const std::vector<double>& query, double r,
                                StateId exclude = kNoState) const {
        std::vector<std::pair<double, StateId>> hits;
        if (root_ >= 0) radiusRecursive(root_, query, r * r, exclude, hits);
        std::sort(hits.begin(), hits.end());
        std::vector<StateId> out;
        out.reserve(hits.size());
        for (const auto& h : hits) out.push_back(h.second);
        return out;
    }

private:
    struct Node {
        std::size_t point;
        std::size_t axis;
        int left = -1;
        int right = -1;
    };

    struct Best {
        explicit Best(std::size_t k) : k(k) {}
        std::size_t k;
        // Max-heap on (distance^2, id) so the worst candidate is on top.
        std::priority_queue<std::pair<double, StateId>> heap;

        double worst() const { return heap.size() < k ? kInf : heap.top().first; }

        void offer(double distSq, StateId id) {
            if (heap.size() < k) {
                heap.push({distSq, id});
            } else if (std::pair<double, StateId>{distSq, id} < heap.top()) {
                heap.pop();
                heap.push({distSq, id});
            }
        }

        std::vector<StateId> sortedIds() {
            std::vector<std::pair<double, StateId>> all;
            all.reserve(heap.size());
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            std::sort(all.begin(), all.end());
            std::vector<StateId> ids;
            ids.reserve(all.size());
            for (const auto& p : all) ids.push_back(p.second);
            return ids;
        }
    };

    double distSq(const std::vector<double>& a, const std::vector<double>& b) const {
        double sq = 0.0;
        for (std::size_t i = 0; i < dimension_; ++i) {
            const double d = a[i] - b[i];
            sq += d * d;
        }
        return sq;
    }

    int buildRecursive(std::vector<std::size_t>::iterator begin,
                       std::vector<std::size_t>::iterator end, std::size_t depth) {
        if (begin == end) return -1;
        const std::size_t axis = depth % dimension_;
        auto mid = begin + (end - begin) / 2;
        std::nth_element(begin, mid, end, [&](std::size_t a, std::size_t b) {
            const double ca = (*points_[a])[axis];
            const double cb = (*points_[b])[axis];
            if (ca != cb) return ca < cb;
            return ids_[a] < ids_[b];
        });
        Node node;
        node.point = *mid;
        node.axis = axis;
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = buildRecursive(begin, mid, depth + 1);
        const int right = buildRecursive(mid + 1, end, depth + 1);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void knnRecursive(int idx, const std::vector<double>& query, StateId exclude,
                      Best& best) const {
        const Node& node = nodes_[idx];
        const auto& p = *points_[node.point];
        if (ids_[node.point] != exclude) best.offer(distSq(query, p), ids_[node.point]);
        const double diff = query[node.axis] - p[node.axis];
        const int near = diff <= 0.0 ? node.left : node.right;
        const int far = diff <= 0.0 ? node.right : node.left;
        if (near >= 0) knnRecursive(near, query, exclude, best);
        if (far >= 0 && diff * diff <= best.worst()) knnRecursive(far, query, exclude, best);
    }

    void radiusRecursive(int idx, const std::vector<double>& query, double rSq, StateId exclude,
                         std::vector<std::pair<double, StateId>>& hits) const {
        const Node& node = nodes_[idx];
        const auto& p = *points_[node.point];
        const double d = distSq(query, p);
        if (d <= rSq && ids_[node.point] != exclude) hits.push_back({d, ids_[node.point]});
        const double diff = query[node.axis] - p[node.axis];
        const int near = diff <= 0.0 ? node.left : node.right;
        const int far = diff <= 0.0 ? node.right : node.left;
        if (near >= 0) radiusRecursive(near, query, rSq, exclude, hits);
        if (far >= 0 && diff * diff <= rSq) radiusRecursive(far, query, rSq, exclude, hits);
    }

    std::vector<const std::vector<double>*> points_;
    std::vector<StateId> ids_;
    std::vector<Node> nodes_;
    std::size_t dimension_ = 0;
    int root_ = -1;
};

}  // namespace plan
