// k-nearest-neighbour index over samples and vertices.
#pragma once

#include <biait/space.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

namespace biait
{
    using Id = std::uint32_t;

    /** ceil(eta * e * (1 + 1/d) * ln n), at least d + 1. */
    inline std::size_t rggK(std::size_t n, std::size_t d, double eta)
    {
        const double dd = static_cast<double>(d);
        const double raw = n > 1 ? eta * std::exp(1.0) * (1.0 + 1.0 / dd) * std::log(static_cast<double>(n)) : 0.0;
        const auto k = static_cast<std::size_t>(std::ceil(raw));
        return std::max(k, d + 1);
    }

    /**
     * Directed k-nearest relation, ties broken by lower id. Linear scan for small sets, a kd-tree
     * otherwise. The tree is rebuilt after every insert/remove, so queries are read-only.
     */
    class NeighborIndex
    {
    public:
        explicit NeighborIndex(std::size_t dim, double eta = 1.001) : dim_(dim), eta_(eta) {}

        std::size_t dim() const { return dim_; }
        std::size_t size() const { return count_; }
        std::uint64_t epoch() const { return epoch_; }
        std::size_t k() const { return rggK(count_, dim_, eta_); }

        bool contains(Id id) const { return id < present_.size() && present_[id]; }

        void insert(Id id, const StateVec &x)
        {
            insertNoRebuild(id, x);
            rebuild();
        }

        void insert(const std::vector<std::pair<Id, StateVec>> &batch)
        {
            for (const auto &[id, x] : batch)
                insertNoRebuild(id, x);
            rebuild();
        }

        void remove(Id id)
        {
            removeNoRebuild(id);
            rebuild();
        }

        void remove(const std::vector<Id> &ids)
        {
            for (Id id : ids)
                removeNoRebuild(id);
            rebuild();
        }

        const StateVec &point(Id id) const
        {
            if (!contains(id))
                throw UsageError("unknown id " + std::to_string(id));
            return points_[id];
        }

        /** The k nearest other points ordered by (distance, id). */
        std::vector<Id> neighbors(Id id) const
        {
            const StateVec &q = point(id);
            const std::size_t k = std::min(this->k(), count_ - 1);
            std::vector<Cand> heap;  // max-heap on (d2, id)
            heap.reserve(k + 1);
            if (count_ <= kLinearLimit)
            {
                for (Id j = 0; j < present_.size(); ++j)
                    if (present_[j] && j != id)
                        offer(heap, k, {dist2(q, points_[j]), j});
            }
            else
                search(root_, q, id, k, heap);
            std::sort_heap(heap.begin(), heap.end());
            std::vector<Id> out;
            out.reserve(heap.size());
            for (const auto &c : heap)
                out.push_back(c.id);
            return out;
        }

        static constexpr std::size_t kLinearLimit = 256;

    private:
        struct Cand
        {
            double d2;
            Id id;
            bool operator<(const Cand &o) const { return d2 < o.d2 || (d2 == o.d2 && id < o.id); }
        };

        struct Node
        {
            Id id;
            int axis;
            int left{-1};
            int right{-1};
        };

        static double dist2(const StateVec &a, const StateVec &b)
        {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                const double d = a[i] - b[i];
                s += d * d;
            }
            return s;
        }

        static void offer(std::vector<Cand> &heap, std::size_t k, Cand c)
        {
            if (k == 0)
                return;
            if (heap.size() < k)
            {
                heap.push_back(c);
                std::push_heap(heap.begin(), heap.end());
            }
            else if (c < heap.front())
            {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = c;
                std::push_heap(heap.begin(), heap.end());
            }
        }

        void insertNoRebuild(Id id, const StateVec &x)
        {
            if (contains(id))
                throw UsageError("duplicate id " + std::to_string(id));
            if (x.size() != dim_)
                throw UsageError("point dimension mismatch");
            if (id >= points_.size())
            {
                points_.resize(id + 1);
                present_.resize(id + 1, false);
            }
            points_[id] = x;
            present_[id] = true;
            ++count_;
            ++epoch_;
        }

        void removeNoRebuild(Id id)
        {
            if (!contains(id))
                throw UsageError("unknown id " + std::to_string(id));
            present_[id] = false;
            points_[id].clear();
            --count_;
            ++epoch_;
        }

        void rebuild()
        {
            nodes_.clear();
            root_ = -1;
            if (count_ <= kLinearLimit)
                return;
            std::vector<Id> ids;
            ids.reserve(count_);
            for (Id j = 0; j < present_.size(); ++j)
                if (present_[j])
                    ids.push_back(j);
            nodes_.reserve(ids.size());
            root_ = build(ids, 0, ids.size(), 0);
        }

        int build(std::vector<Id> &ids, std::size_t lo, std::size_t hi, std::size_t depth)
        {
            if (lo >= hi)
                return -1;
            const int axis = static_cast<int>(depth % dim_);
            const std::size_t mid = lo + (hi - lo) / 2;
            std::nth_element(ids.begin() + static_cast<std::ptrdiff_t>(lo), ids.begin() + static_cast<std::ptrdiff_t>(mid),
                             ids.begin() + static_cast<std::ptrdiff_t>(hi), [&](Id a, Id b) {
                                 return points_[a][axis] < points_[b][axis] ||
                                        (points_[a][axis] == points_[b][axis] && a < b);
                             });
            const int index = static_cast<int>(nodes_.size());
            nodes_.push_back({ids[mid], axis});
            const int l = build(ids, lo, mid, depth + 1);
            const int r = build(ids, mid + 1, hi, depth + 1);
            nodes_[index].left = l;
            nodes_[index].right = r;
            return index;
        }

        void search(int node, const StateVec &q, Id self, std::size_t k, std::vector<Cand> &heap) const
        {
            if (node < 0)
                return;
            const Node &n = nodes_[node];
            const StateVec &p = points_[n.id];
            if (n.id != self)
                offer(heap, k, {dist2(q, p), n.id});
            const double diff = q[n.axis] - p[n.axis];
            const int nearSide = diff < 0.0 ? n.left : n.right;
            const int farSide = diff < 0.0 ? n.right : n.left;
            search(nearSide, q, self, k, heap);
            // ties at equal distance must still be visited for the id tie-break
            if (heap.size() < k || diff * diff <= heap.front().d2)
                search(farSide, q, self, k, heap);
        }

        std::size_t dim_;
        double eta_;
        std::vector<StateVec> points_;
        std::vector<bool> present_;
        std::size_t count_{0};
        std::uint64_t epoch_{0};
        std::vector<Node> nodes_;
        int root_{-1};
    };
}  // namespace biait
