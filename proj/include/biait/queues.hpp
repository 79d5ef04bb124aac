// Addressable lexicographic priority queue and the planner's key functions.
#pragma once

#include <biait/space.hpp>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace biait
{
    /** Lexicographic key; std::array already compares lexicographically. */
    template <std::size_t N>
    using LexKey = std::array<double, N>;

    /**
     * Binary heap with a handle map entry -> slot. Keys are stored by value. Exactly-equal keys pop in
     * insertion order; an update keeps the entry's original insertion index.
     */
    template <typename Entry, typename Key, typename Hash = std::hash<Entry>>
    class AddressablePQ
    {
    public:
        bool empty() const { return heap_.empty(); }
        std::size_t size() const { return heap_.size(); }
        bool contains(const Entry &e) const { return slot_.count(e) != 0; }

        void clear()
        {
            heap_.clear();
            slot_.clear();
        }

        void pushOrUpdate(const Entry &e, const Key &key)
        {
            for ([[maybe_unused]] double c : key)
                assert(!std::isnan(c));
            auto it = slot_.find(e);
            if (it == slot_.end())
            {
                heap_.push_back({key, seq_++, e});
                slot_.emplace(e, heap_.size() - 1);
                siftUp(heap_.size() - 1);
                return;
            }
            const std::size_t i = it->second;
            const Key old = heap_[i].key;
            heap_[i].key = key;
            if (key < old)
                siftUp(i);
            else
                siftDown(i);
        }

        const Entry &top() const
        {
            if (heap_.empty())
                throw std::out_of_range("pop from empty queue");
            return heap_.front().entry;
        }

        const Key &topKey() const
        {
            if (heap_.empty())
                throw std::out_of_range("pop from empty queue");
            return heap_.front().key;
        }

        std::pair<Entry, Key> popBest()
        {
            if (heap_.empty())
                throw std::out_of_range("pop from empty queue");
            std::pair<Entry, Key> out{heap_.front().entry, heap_.front().key};
            removeAt(0);
            return out;
        }

        bool remove(const Entry &e)
        {
            auto it = slot_.find(e);
            if (it == slot_.end())
                return false;
            removeAt(it->second);
            return true;
        }

        const Key &keyOf(const Entry &e) const { return heap_.at(slot_.at(e)).key; }

        /** Unordered view of the stored entries. */
        template <typename F>
        void forEach(F &&f) const
        {
            for (const auto &n : heap_)
                f(n.entry, n.key);
        }

    private:
        struct Node
        {
            Key key;
            std::uint64_t seq;
            Entry entry;
        };

        static bool before(const Node &a, const Node &b)
        {
            return a.key < b.key || (a.key == b.key && a.seq < b.seq);
        }

        void place(std::size_t i, Node &&n)
        {
            heap_[i] = std::move(n);
            slot_[heap_[i].entry] = i;
        }

        void siftUp(std::size_t i)
        {
            Node n = std::move(heap_[i]);
            while (i > 0)
            {
                const std::size_t parent = (i - 1) / 2;
                if (!before(n, heap_[parent]))
                    break;
                place(i, std::move(heap_[parent]));
                i = parent;
            }
            place(i, std::move(n));
        }

        void siftDown(std::size_t i)
        {
            Node n = std::move(heap_[i]);
            const std::size_t size = heap_.size();
            while (true)
            {
                std::size_t child = 2 * i + 1;
                if (child >= size)
                    break;
                if (child + 1 < size && before(heap_[child + 1], heap_[child]))
                    ++child;
                if (!before(heap_[child], n))
                    break;
                place(i, std::move(heap_[child]));
                i = child;
            }
            place(i, std::move(n));
        }

        void removeAt(std::size_t i)
        {
            slot_.erase(heap_[i].entry);
            const std::size_t last = heap_.size() - 1;
            if (i == last)
            {
                heap_.pop_back();
                return;
            }
            heap_[i] = std::move(heap_[last]);
            heap_.pop_back();
            const Entry moved = heap_[i].entry;
            slot_[moved] = i;
            siftUp(i);
            siftDown(slot_.at(moved));
        }

        std::vector<Node> heap_;
        std::unordered_map<Entry, std::size_t, Hash> slot_;
        std::uint64_t seq_{0};
    };

    using VertexKey = LexKey<2>;
    using EdgeKey = LexKey<3>;
    using MeetKey = LexKey<1>;

    /** (min(ĥ_g, ĥ_rhs) + ĝ_opposing ; min(ĥ_g, ĥ_rhs)) */
    inline VertexKey lazyVertexKey(double g, double rhs, double ghatOpposing)
    {
        const double m = std::min(g, rhs);
        return {m + ghatOpposing, m};
    }

    /** (g(x_p) + ĉ + ĥ_g,opp(x_c) ; g(x_p) + ĉ ; g(x_p)) */
    inline EdgeKey edgeKey(double gParent, double chat, double hOpposing)
    {
        if (!std::isfinite(gParent))
            return {kInf, kInf, kInf};
        return {gParent + chat + hOpposing, gParent + chat, gParent};
    }

    /** ĥ_g-F(x1) + ĉ(x1, x2) + ĥ_g-R(x2) */
    inline MeetKey lazyMeetKey(double hF, double chat, double hR) { return {hF + chat + hR}; }

    /** g_F(x1) + c(x1, x2) + g_R(x2) */
    inline MeetKey meetKey(double gF, double c, double gR) { return {gF + c + gR}; }
}  // namespace biait
