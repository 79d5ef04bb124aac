// Bidirectional lazy-search planner (BiAIT*); the unidirectional mode is the AIT* baseline.
#pragma once

#include <biait/events.hpp>
#include <biait/nngraph.hpp>
#include <biait/queues.hpp>
#include <biait/sampling.hpp>
#include <biait/space.hpp>

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

namespace biait
{
    inline constexpr Id kNoId = static_cast<Id>(-1);

    enum Role : int
    {
        kA = 0,  // start side
        kB = 1  // goal side
    };

    inline int opposite(int r) { return 1 - r; }

    struct TerminationConfig
    {
        std::optional<double> timeBudgetMs;
        std::optional<double> targetCost;
        std::optional<std::size_t> maxIterations;
        std::optional<std::size_t> maxBatches;

        bool any() const { return timeBudgetMs || targetCost || maxIterations || maxBatches; }
    };

    struct PlannerConfig
    {
        SamplerConfig sampler;
        double eta{1.001};
        std::optional<double> resolution;  // overrides the problem's when set
        TerminationConfig termination;
        bool fineEvents{false};  // also log lazy-pop, edge-pop and collision-check
    };

    struct Solution
    {
        std::vector<StateVec> path;
        double cost{kInf};
        double foundAtMs{0.0};
    };

    enum class Status
    {
        Solved,
        Failed,
        Timeout
    };

    inline const char *statusName(Status s)
    {
        switch (s)
        {
            case Status::Solved:
                return "solved";
            case Status::Failed:
                return "failed";
            case Status::Timeout:
                return "timeout";
        }
        return "failed";
    }

    struct Counters
    {
        std::size_t collisionChecks{0};
        std::array<std::size_t, 2> lazyPops{0, 0};
        std::size_t edgePops{0};
        std::size_t samples{0};
        std::size_t repairEvents{0};
        std::size_t repairFootprint{0};
        std::size_t batches{0};
        std::size_t iterations{0};
        std::optional<std::size_t> lazyPopsBeforeFiniteEdge;

        std::size_t lazyPopsTotal() const { return lazyPops[0] + lazyPops[1]; }
    };

    struct PlanResult
    {
        Status status{Status::Failed};
        std::vector<Solution> solutions;
        Counters counters;
        double elapsedMs{0.0};
    };

    struct LazyData
    {
        double rhs{kInf};
        double g{kInf};
        Id parent{kNoId};
        std::vector<Id> children;
        double seed{kInf};  // valid-tree cost when seeded at initBatch
    };

    struct TreeData
    {
        double cost{kInf};
        Id parent{kNoId};
        std::vector<Id> children;
    };

    /**
     * Per-vertex bookkeeping. A vertex is owned by at most one lazy search; prop[q] is the heuristic of
     * role q carried by a vertex owned by the other role, with via[q] naming the neighbour it came from.
     */
    struct VertexRecord
    {
        Id id{kNoId};
        StateVec state;
        double ghatF{kInf};
        double ghatR{kInf};
        bool alive{true};
        std::array<bool, 2> root{false, false};
        std::array<LazyData, 2> lazy;
        std::array<TreeData, 2> tree;
        int owner{-1};
        std::array<double, 2> prop{kInf, kInf};
        std::array<Id, 2> via{kNoId, kNoId};
        std::array<std::vector<Id>, 2> dependents;
        std::vector<Id> meets;  // lazy meet partners

        double ghatToward(int r) const { return r == kA ? ghatR : ghatF; }
    };

    struct DirectedEdge
    {
        Id p;
        Id c;
        bool operator==(const DirectedEdge &o) const { return p == o.p && c == o.c; }
    };

    struct DirectedEdgeHash
    {
        std::size_t operator()(const DirectedEdge &e) const
        {
            return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(e.p) << 32) | e.c);
        }
    };

    inline std::uint64_t undirectedKey(Id a, Id b)
    {
        if (a > b)
            std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    class LazyPlanner
    {
    public:
        enum class Mode
        {
            Bidirectional,
            Unidirectional
        };

        using VertexQueue = AddressablePQ<Id, VertexKey>;
        using EdgeQueue = AddressablePQ<DirectedEdge, EdgeKey, DirectedEdgeHash>;

        LazyPlanner(ProblemDef problem, PlannerConfig cfg, Mode mode)
          : p_(std::move(problem)), cfg_(std::move(cfg)), mode_(mode), index_(p_.dim, cfg_.eta), rng_(cfg_.sampler.seed)
        {
            validateProblem(p_);
            res_ = cfg_.resolution ? *cfg_.resolution : p_.resolution;
            const Id s = newVertex(p_.start);
            records_[s].root[kA] = true;
            records_[s].tree[kA].cost = 0.0;
            roots_[kA].push_back(s);
            for (const auto &g : p_.goals)
            {
                const Id id = newVertex(g);
                records_[id].root[kB] = true;
                records_[id].tree[kB].cost = 0.0;
                roots_[kB].push_back(id);
            }
            std::vector<std::pair<Id, StateVec>> pts;
            for (const auto &r : records_)
                pts.emplace_back(r.id, r.state);
            index_.insert(pts);
            clock0_ = std::chrono::steady_clock::now();
        }

        bool bidirectional() const { return mode_ == Mode::Bidirectional; }

        /** Main loop; runs until a termination criterion fires. */
        PlanResult solve()
        {
            if (!cfg_.termination.any())
                throw UsageError("termination: at least one criterion required");
            clock0_ = std::chrono::steady_clock::now();
            while (!terminated())
            {
                ++counters_.iterations;
                if (bidirectional())
                {
                    const int r = active_;
                    if (!lazySearchTerminate(r))
                        lazySearchStep(r);
                    else if (forwardSearchMayImprove(r))
                        forwardSearchStep(r);
                    else if (!lazySearchTerminate(opposite(r)) || forwardSearchMayImprove(opposite(r)))
                    {
                        // the other role still has work; just hand over
                    }
                    else if (!newBatch())
                        break;
                    swapRoles();
                }
                else
                {
                    if (!lazySearchTerminate(kB))
                        lazySearchStep(kB);
                    else if (forwardSearchMayImprove(kA))
                        forwardSearchStep(kA);
                    else if (!newBatch())
                        break;
                }
                noteFiniteEdge();
            }
            PlanResult out;
            out.solutions = solutions_;
            out.counters = counters_;
            out.elapsedMs = elapsedMs();
            if (solutions_.empty())
                out.status = Status::Failed;
            else if (cfg_.termination.targetCost && cCur_ > *cfg_.termination.targetCost)
                out.status = Status::Timeout;
            else
                out.status = Status::Solved;
            return out;
        }

        // ---------------------------------------------------------------- batches

        /** Adds samples as unconnected vertices; the graph is rebuilt by the next initBatch. */
        std::vector<Id> addSamples(const std::vector<StateVec> &xs)
        {
            std::vector<std::pair<Id, StateVec>> pts;
            std::vector<Id> ids;
            for (const auto &x : xs)
            {
                checkDim(p_, x);
                const Id id = newVertex(x);
                pts.emplace_back(id, x);
                ids.push_back(id);
            }
            index_.insert(pts);
            counters_.samples += xs.size();
            return ids;
        }

        /** Prune, sample the next batch and reinitialize; false when the batch limit is reached. */
        bool newBatch()
        {
            if (cfg_.termination.maxBatches && counters_.batches >= *cfg_.termination.maxBatches)
                return false;
            prune();
            std::vector<StateVec> xs;
            try
            {
                xs = sampleBatch(p_, cfg_.sampler, counters_.batches, cCur_, bestPath_, rng_);
            }
            catch (const SpaceSaturated &)
            {
                saturated_ = true;
                return false;
            }
            log(EventType::SampleBatch, -1, static_cast<Id>(counters_.batches), static_cast<Id>(xs.size()), cCur_);
            addSamples(xs);
            ++counters_.batches;
            initBatch();
            return true;
        }

        /** Clears lazy structures and queues, seeds the lazy searches and expands the roots. */
        void initBatch()
        {
            rebuildAdjacency();
            for (int r = 0; r < 2; ++r)
            {
                lazyQueue_[r].clear();
                edgeQueue_[r].clear();
            }
            for (auto &v : records_)
            {
                v.lazy = {};
                v.owner = -1;
                v.prop = {kInf, kInf};
                v.via = {kNoId, kNoId};
                v.dependents[0].clear();
                v.dependents[1].clear();
                v.meets.clear();
            }
            if (bidirectional())
            {
                for (auto &v : records_)
                {
                    if (!v.alive)
                        continue;
                    const bool inA = std::isfinite(v.tree[kA].cost);
                    const bool inB = std::isfinite(v.tree[kB].cost);
                    int r = -1;
                    if (v.root[kA])
                        r = kA;
                    else if (v.root[kB])
                        r = kB;
                    else if (inA && inB)
                        r = v.tree[kA].cost <= v.tree[kB].cost ? kA : kB;
                    else if (inA)
                        r = kA;
                    else if (inB)
                        r = kB;
                    if (r >= 0)
                        seed(r, v.id, v.tree[r].cost);
                }
            }
            else
            {
                for (Id g : roots_[kB])
                    seed(kB, g, 0.0);
            }
            for (int r : edgeRoles())
                for (Id x : roots_[r])
                    expand(r, x);
        }

        /** Deletes samples outside the informed set; detached valid-tree descendants become plain samples. */
        void prune()
        {
            if (!std::isfinite(cCur_))
                return;
            std::vector<Id> doomed;
            for (const auto &v : records_)
                if (v.alive && !v.root[kA] && !v.root[kB] && v.ghatF + v.ghatR > cCur_)
                    doomed.push_back(v.id);
            if (doomed.empty())
                return;
            for (int r = 0; r < 2; ++r)
                for (Id x : doomed)
                    if (std::isfinite(records_[x].tree[r].cost))
                        detachSubtree(r, x);
            for (Id x : doomed)
            {
                auto &v = records_[x];
                v.alive = false;
                v.lazy = {};
                v.meets.clear();
            }
            index_.remove(doomed);
            for (auto it = validMeets_.begin(); it != validMeets_.end();)
            {
                const auto &a = records_[it->first];
                const auto &b = records_[it->second];
                if (!a.alive || !b.alive || !std::isfinite(a.tree[kA].cost) || !std::isfinite(b.tree[kB].cost))
                    it = validMeets_.erase(it);
                else
                    ++it;
            }
        }

        // ---------------------------------------------------------------- lazy search

        bool lazySearchTerminate(int r) const
        {
            if (lazyQueue_[r].empty())
                return true;
            int best = -1;
            for (int s : edgeRoles())
            {
                if (edgeQueue_[s].empty())
                    return true;
                if (best < 0 || edgeQueue_[s].topKey() < edgeQueue_[best].topKey())
                    best = s;
            }
            const EdgeKey &ek = edgeQueue_[best].topKey();
            if (!(ek[0] <= lazyQueue_[r].topKey()[0]))
                return false;
            return guideConsistent(opposite(best), edgeQueue_[best].top().c);
        }

        void lazySearchStep(int r)
        {
            const Id x = lazyQueue_[r].popBest().first;
            ++counters_.lazyPops[r];
            if (cfg_.fineEvents)
                log(EventType::LazyPop, r, x, kNoId, records_[x].lazy[r].rhs);
            const LazyData &L = records_[x].lazy[r];
            if (L.rhs < L.g)
                setG(r, x, L.rhs);
            else
            {
                setG(r, x, kInf);
                updateState(r, x);
            }
            for (Id n : adj_[x])
                if (!blacklisted(x, n))
                    updateState(r, n);
        }

        /** rhs relaxation on the vertices this role may own; meet detection on the other role's. */
        void updateState(int r, Id x)
        {
            VertexRecord &v = records_[x];
            if (!v.alive || v.root[r])
                return;
            if (v.owner == opposite(r))
            {
                meetBranch(r, x);
                return;
            }
            double best = v.lazy[r].seed;
            Id bestParent = kNoId;
            const auto &nbrs = adj_[x];
            for (std::size_t i = 0; i < nbrs.size(); ++i)
            {
                const Id n = nbrs[i];
                const VertexRecord &w = records_[n];
                if (w.owner == opposite(r) || !std::isfinite(w.lazy[r].g) || blacklisted(x, n))
                    continue;
                const double cand = w.lazy[r].g + adjCost_[x][i];
                if (cand < best)
                {
                    best = cand;
                    bestParent = n;
                }
            }
            const bool parentChanged = v.lazy[r].parent != bestParent;
            setLazyParent(r, x, bestParent);
            v.lazy[r].rhs = best;
            if (std::isfinite(best))
                v.owner = r;
            if (v.lazy[r].rhs != v.lazy[r].g)
                lazyQueue_[r].pushOrUpdate(x, lazyKey(r, x));
            else
                lazyQueue_[r].remove(x);
            if (v.owner == r && !std::isfinite(v.lazy[r].rhs) && !std::isfinite(v.lazy[r].g) &&
                !std::isfinite(v.lazy[r].seed))
                release(r, x);
            else if (parentChanged && bestParent != kNoId && bidirectional() && v.owner == r &&
                     std::isfinite(v.prop[opposite(r)]))
                offer(opposite(r), bestParent, v.prop[opposite(r)] + cost(x, bestParent), x);
        }

        /** Runs every lazy search until its queue is empty. */
        void runLazyToQuiescence()
        {
            bool progressed = true;
            while (progressed)
            {
                progressed = false;
                for (int r : lazyRoles())
                    if (!lazyQueue_[r].empty())
                    {
                        lazySearchStep(r);
                        progressed = true;
                    }
            }
        }

        // ---------------------------------------------------------------- valid search

        bool forwardSearchMayImprove(int r) const
        {
            return !edgeQueue_[r].empty() && edgeQueue_[r].topKey()[0] < cCur_;
        }

        void forwardSearchStep(int r)
        {
            const DirectedEdge e = edgeQueue_[r].popBest().first;
            ++counters_.edgePops;
            if (cfg_.fineEvents)
                log(EventType::EdgePop, r, e.p, e.c, 0.0);
            VertexRecord &p = records_[e.p];
            VertexRecord &c = records_[e.c];
            if (c.tree[r].parent == e.p)
            {
                expand(r, e.c);
                return;
            }
            const double chat = cost(e.p, e.c);
            if (!(p.tree[r].cost + chat < c.tree[r].cost))
                return;
            if (!edgeValid(r, e.p, e.c))
            {
                handleCollision(e.p, e.c);
                return;
            }
            const double g = p.tree[r].cost + chat;
            const bool improves = g + hEff(opposite(r), e.c) < cCur_;
            if (std::isfinite(c.tree[opposite(r)].cost) && g + c.tree[opposite(r)].cost < cCur_)
            {
                if (r == kA)
                    validMeets_.insert({e.p, e.c});
                else
                    validMeets_.insert({e.c, e.p});
                log(EventType::Meet, r, e.p, e.c, g + c.tree[opposite(r)].cost);
                updateSolution();
            }
            if (improves && g < c.tree[r].cost)
            {
                attach(r, e.c, e.p);
                if (!validMeets_.empty())
                    updateSolution();
            }
        }

        /** Queues the outgoing candidate edges of a valid-tree vertex. */
        void expand(int r, Id x)
        {
            const VertexRecord &v = records_[x];
            const auto &nbrs = adj_[x];
            for (std::size_t i = 0; i < nbrs.size(); ++i)
            {
                const Id n = nbrs[i];
                if (n == v.tree[r].parent || blacklisted(x, n))
                    continue;
                pushEdge(r, x, n, adjCost_[x][i]);
            }
        }

        /** Treat (a, b) as colliding: blacklist it and repair every lazy structure using it. */
        void injectCollision(Id a, Id b) { handleCollision(a, b); }

        /** Linear rescan of the valid meet set. */
        void updateSolution()
        {
            double best = cCur_;
            std::pair<Id, Id> arg{kNoId, kNoId};
            for (const auto &[a, b] : validMeets_)
            {
                const double k = meetKey(records_[a].tree[kA].cost, cost(a, b), records_[b].tree[kB].cost)[0];
                if (k < best)
                {
                    best = k;
                    arg = {a, b};
                }
            }
            if (arg.first == kNoId)
                return;
            cCur_ = best;
            std::vector<StateVec> path;
            for (Id x = arg.first; x != kNoId; x = records_[x].tree[kA].parent)
                path.push_back(records_[x].state);
            std::reverse(path.begin(), path.end());
            for (Id x = arg.second; x != kNoId; x = records_[x].tree[kB].parent)
                path.push_back(records_[x].state);
            bestPath_ = path;
            solutions_.push_back({std::move(path), best, elapsedMs()});
            log(EventType::Solution, -1, arg.first, arg.second, best);
        }

        void swapRoles() { active_ = opposite(active_); }

        // ---------------------------------------------------------------- accessors

        const ProblemDef &problem() const { return p_; }
        const PlannerConfig &config() const { return cfg_; }
        int active() const { return active_; }
        double cCur() const { return cCur_; }
        double resolution() const { return res_; }
        const std::vector<Solution> &solutions() const { return solutions_; }
        const std::vector<StateVec> &bestPath() const { return bestPath_; }
        const Counters &counters() const { return counters_; }
        const EventLog &events() const { return events_; }
        std::size_t vertexCount() const { return records_.size(); }
        const VertexRecord &vertex(Id id) const { return records_.at(id); }
        const std::vector<Id> &adjacent(Id id) const { return adj_.at(id); }
        const std::vector<Id> &roots(int r) const { return roots_[r]; }
        const VertexQueue &lazyQueue(int r) const { return lazyQueue_[r]; }
        const EdgeQueue &edgeQueue(int r) const { return edgeQueue_[r]; }
        const std::set<std::pair<Id, Id>> &validMeets() const { return validMeets_; }
        bool blacklisted(Id a, Id b) const
        {
            return !blacklist_.empty() && blacklist_.count(undirectedKey(a, b)) != 0;
        }
        bool whitelisted(Id a, Id b) const { return whitelist_.count(undirectedKey(a, b)) != 0; }
        bool saturated() const { return saturated_; }
        double elapsedMs() const
        {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - clock0_).count();
        }

        std::vector<int> lazyRoles() const
        {
            return bidirectional() ? std::vector<int>{kA, kB} : std::vector<int>{kB};
        }

        std::vector<int> edgeRoles() const
        {
            return bidirectional() ? std::vector<int>{kA, kB} : std::vector<int>{kA};
        }

        /** ĥ_g of role q at x: the role's own lazy value, or the propagated one on the other role's vertices. */
        double hEff(int q, Id x) const
        {
            const VertexRecord &v = records_[x];
            return v.owner == opposite(q) ? v.prop[q] : v.lazy[q].g;
        }

        bool guideConsistent(int q, Id x) const
        {
            const VertexRecord &v = records_[x];
            if (v.owner == opposite(q))
                return true;
            return v.lazy[q].rhs == v.lazy[q].g;
        }

        VertexKey lazyKey(int r, Id x) const
        {
            const VertexRecord &v = records_[x];
            return lazyVertexKey(v.lazy[r].g, v.lazy[r].rhs, v.ghatToward(r));
        }

        double cost(Id a, Id b) const { return euclidCost(records_[a].state, records_[b].state); }

    private:
        Id newVertex(const StateVec &x)
        {
            VertexRecord v;
            v.id = static_cast<Id>(records_.size());
            v.state = x;
            const auto [f, r] = heuristicBounds(p_, x);
            v.ghatF = f;
            v.ghatR = r;
            records_.push_back(std::move(v));
            adj_.emplace_back();
            mark_.push_back(0);
            return records_.back().id;
        }

        void log(EventType t, int role, Id a, Id b, double value)
        {
            events_.push_back({t, role, a, b, value, elapsedMs()});
        }

        bool terminated() const
        {
            const auto &t = cfg_.termination;
            if (t.targetCost && cCur_ <= *t.targetCost)
                return true;
            if (t.maxIterations && counters_.iterations >= *t.maxIterations)
                return true;
            if (t.timeBudgetMs && elapsedMs() >= *t.timeBudgetMs)
                return true;
            return false;
        }

        void noteFiniteEdge()
        {
            if (counters_.lazyPopsBeforeFiniteEdge)
                return;
            for (int s : edgeRoles())
                if (!edgeQueue_[s].empty() && std::isfinite(edgeQueue_[s].topKey()[0]))
                {
                    counters_.lazyPopsBeforeFiniteEdge = counters_.lazyPopsTotal();
                    return;
                }
        }

        void rebuildAdjacency()
        {
            for (auto &a : adj_)
                a.clear();
            for (const auto &v : records_)
            {
                if (!v.alive)
                    continue;
                for (Id n : index_.neighbors(v.id))
                {
                    adj_[v.id].push_back(n);
                    adj_[n].push_back(v.id);
                }
                for (int r = 0; r < 2; ++r)
                    if (v.tree[r].parent != kNoId)
                    {
                        adj_[v.id].push_back(v.tree[r].parent);
                        adj_[v.tree[r].parent].push_back(v.id);
                    }
            }
            adjCost_.resize(adj_.size());
            for (std::size_t i = 0; i < adj_.size(); ++i)
            {
                auto &a = adj_[i];
                std::sort(a.begin(), a.end());
                a.erase(std::unique(a.begin(), a.end()), a.end());
                adjCost_[i].resize(a.size());
                for (std::size_t j = 0; j < a.size(); ++j)
                    adjCost_[i][j] = cost(static_cast<Id>(i), a[j]);
            }
        }

        void seed(int r, Id x, double c)
        {
            VertexRecord &v = records_[x];
            v.lazy[r].seed = c;
            v.lazy[r].rhs = c;
            v.owner = r;
            lazyQueue_[r].pushOrUpdate(x, lazyKey(r, x));
        }

        void detachSubtree(int r, Id x)
        {
            TreeData &t = records_[x].tree[r];
            if (t.parent != kNoId)
            {
                auto &siblings = records_[t.parent].tree[r].children;
                siblings.erase(std::find(siblings.begin(), siblings.end(), x));
            }
            std::vector<Id> stack{x};
            while (!stack.empty())
            {
                const Id y = stack.back();
                stack.pop_back();
                TreeData &ty = records_[y].tree[r];
                for (Id ch : ty.children)
                    stack.push_back(ch);
                ty = {};
            }
        }

        void setLazyParent(int r, Id x, Id np)
        {
            LazyData &L = records_[x].lazy[r];
            if (L.parent == np)
                return;
            if (L.parent != kNoId)
            {
                auto &ch = records_[L.parent].lazy[r].children;
                ch.erase(std::find(ch.begin(), ch.end(), x));
            }
            L.parent = np;
            if (np != kNoId)
                records_[np].lazy[r].children.push_back(x);
        }

        void setG(int r, Id x, double value)
        {
            LazyData &L = records_[x].lazy[r];
            const double old = L.g;
            if (old == value)
                return;
            L.g = value;
            if (records_[x].owner != opposite(r))
                sourceChanged(r, x, old, value);
        }

        /** Gives up ownership of a vertex whose lazy values for r are both infinite. */
        void release(int r, Id x)
        {
            VertexRecord &v = records_[x];
            v.owner = -1;
            if (!bidirectional())
                return;
            std::vector<Id> starts;
            for (Id w : v.meets)
            {
                auto &m = records_[w].meets;
                m.erase(std::find(m.begin(), m.end(), x));
                if (records_[w].via[r] == x)
                    starts.push_back(w);
            }
            v.meets.clear();
            const int q = opposite(r);
            if (std::isfinite(v.prop[q]) || v.via[q] != kNoId)
            {
                relinkVia(q, x, kNoId);
                v.prop[q] = kInf;
                invalidateProp(q, std::vector<Id>(v.dependents[q]));
            }
            invalidateProp(r, starts);
            rekeyInto(r, x);
        }

        void meetBranch(int r, Id x)
        {
            if (!bidirectional())
                return;
            const int o = opposite(r);
            const LazyData &Lx = records_[x].lazy[o];
            if (Lx.rhs != Lx.g || !std::isfinite(Lx.g))
                return;
            for (Id n : adj_[x])
            {
                if (blacklisted(x, n))
                    continue;
                const VertexRecord &w = records_[n];
                if (w.owner != r || w.lazy[r].rhs != w.lazy[r].g || !std::isfinite(w.lazy[r].g))
                    continue;
                addLazyMeet(n, x);
                lazyTreesMeet(r, n, x);
            }
        }

        void addLazyMeet(Id a, Id b)
        {
            auto &m = records_[a].meets;
            if (std::find(m.begin(), m.end(), b) != m.end())
                return;
            m.push_back(b);
            records_[b].meets.push_back(a);
            if (cfg_.fineEvents)
                log(EventType::Meet, -1, a, b, kInf);
        }

        /** x owned by r, y owned by the other role: exchange heuristics across the meet edge. */
        void lazyTreesMeet(int r, Id x, Id y)
        {
            const double c = cost(x, y);
            offer(opposite(r), x, records_[y].lazy[opposite(r)].g + c, y);
            offer(r, y, records_[x].lazy[r].g + c, x);
        }

        void relinkVia(int q, Id u, Id src)
        {
            VertexRecord &v = records_[u];
            if (v.via[q] == src)
                return;
            if (v.via[q] != kNoId)
            {
                auto &d = records_[v.via[q]].dependents[q];
                d.erase(std::find(d.begin(), d.end(), u));
            }
            v.via[q] = src;
            if (src != kNoId)
                records_[src].dependents[q].push_back(u);
        }

        /** Lowers prop[q](u) to value when that is an improvement. */
        void offer(int q, Id u, double value, Id src)
        {
            VertexRecord &v = records_[u];
            if (v.owner != opposite(q) || !(value < v.prop[q]))
                return;
            const double old = v.prop[q];
            relinkVia(q, u, src);
            v.prop[q] = value;
            sourceChanged(q, u, old, value);
        }

        /**
         * Role-q heuristic at s moved from old to value. Decreases are pushed to dependents and
         * toward the lazy root; increases invalidate everything derived from s.
         */
        void sourceChanged(int q, Id s, double old, double value)
        {
            rekeyInto(opposite(q), s);
            if (!bidirectional())
                return;
            if (value < old)
            {
                const std::vector<Id> deps = records_[s].dependents[q];
                for (Id e : deps)
                    offer(q, e, value + cost(e, s), s);
                const VertexRecord &v = records_[s];
                if (v.owner == opposite(q))
                {
                    const Id p = v.lazy[opposite(q)].parent;
                    if (p != kNoId && !blacklisted(s, p))
                        offer(q, p, value + cost(s, p), s);
                }
                else
                {
                    const std::vector<Id> partners = v.meets;
                    for (Id w : partners)
                        if (!blacklisted(s, w))
                            offer(q, w, value + cost(s, w), s);
                }
            }
            else if (value > old)
                invalidateProp(q, std::vector<Id>(records_[s].dependents[q]));
        }

        /** Resets prop[q] on starts and everything derived from them, then re-offers surviving sources. */
        void invalidateProp(int q, const std::vector<Id> &starts)
        {
            if (starts.empty())
                return;
            const std::uint32_t stamp = ++stamp_;
            std::vector<Id> closure;
            for (Id s : starts)
                if (mark_[s] != stamp && records_[s].owner == opposite(q))
                {
                    mark_[s] = stamp;
                    closure.push_back(s);
                }
            for (std::size_t i = 0; i < closure.size(); ++i)
                for (Id e : records_[closure[i]].dependents[q])
                    if (mark_[e] != stamp)
                    {
                        mark_[e] = stamp;
                        closure.push_back(e);
                    }
            for (Id u : closure)
            {
                relinkVia(q, u, kNoId);
                records_[u].prop[q] = kInf;
            }
            for (Id u : closure)
                rekeyInto(opposite(q), u);
            for (Id u : closure)
            {
                const std::vector<Id> partners = records_[u].meets;
                for (Id w : partners)
                    if (!blacklisted(u, w) && std::isfinite(records_[w].lazy[q].g))
                        offer(q, u, records_[w].lazy[q].g + cost(u, w), w);
                const std::vector<Id> children = records_[u].lazy[opposite(q)].children;
                for (Id c : children)
                    if (!blacklisted(u, c) && records_[c].owner == opposite(q) && std::isfinite(records_[c].prop[q]))
                        offer(q, u, records_[c].prop[q] + cost(u, c), c);
            }
        }

        /** Re-keys edges of role r whose child is c (their key uses the opposite heuristic at c). */
        void rekeyInto(int r, Id c)
        {
            if (!bidirectional() && r != kA)
                return;
            const auto &nbrs = adj_[c];
            for (std::size_t i = 0; i < nbrs.size(); ++i)
            {
                const Id p = nbrs[i];
                if (!std::isfinite(records_[p].tree[r].cost) || blacklisted(p, c))
                    continue;
                const double chat = adjCost_[c][i];
                if (edgeQueue_[r].contains({p, c}) || records_[p].tree[r].cost + chat < records_[c].tree[r].cost)
                    pushEdge(r, p, c, chat);
            }
        }

        /** Inserts or re-keys (x, n); edges proven useless by a finite key are dropped. */
        void pushEdge(int r, Id x, Id n, double chat)
        {
            const VertexRecord &v = records_[x];
            const VertexRecord &w = records_[n];
            const DirectedEdge e{x, n};
            if (w.tree[r].parent != x && !(v.tree[r].cost + chat < w.tree[r].cost))
            {
                edgeQueue_[r].remove(e);
                return;
            }
            const EdgeKey key = edgeKey(v.tree[r].cost, chat, hEff(opposite(r), n));
            if (std::isfinite(cCur_) && std::isfinite(key[0]) && !(key[0] < cCur_))
            {
                edgeQueue_[r].remove(e);
                return;
            }
            edgeQueue_[r].pushOrUpdate(e, key);
        }

        bool edgeValid(int r, Id a, Id b)
        {
            const std::uint64_t k = undirectedKey(a, b);
            if (whitelist_.count(k))
                return true;
            if (blacklist_.count(k))
                return false;
            ++counters_.collisionChecks;
            // the exact segment test rejects corner clips that fall between two interpolation steps
            const bool ok = motionValid(p_, records_[a].state, records_[b].state, res_) &&
                            segmentClear(p_, records_[a].state, records_[b].state);
            if (cfg_.fineEvents)
                log(EventType::CollisionCheck, r, a, b, ok ? 1.0 : 0.0);
            if (ok)
                whitelist_.insert(k);
            return ok;
        }

        void attach(int r, Id c, Id p)
        {
            assert(whitelisted(p, c));
            TreeData &t = records_[c].tree[r];
            if (t.parent != kNoId)
            {
                auto &siblings = records_[t.parent].tree[r].children;
                siblings.erase(std::find(siblings.begin(), siblings.end(), c));
            }
            t.parent = p;
            records_[p].tree[r].children.push_back(c);
            std::vector<Id> stack{c};
            while (!stack.empty())
            {
                const Id y = stack.back();
                stack.pop_back();
                TreeData &ty = records_[y].tree[r];
                ty.cost = records_[ty.parent].tree[r].cost + cost(ty.parent, y);
                expand(r, y);
                for (Id ch : ty.children)
                    stack.push_back(ch);
            }
        }

        void handleCollision(Id a, Id b)
        {
            blacklist_.insert(undirectedKey(a, b));
            edgeQueue_[kA].remove({a, b});
            edgeQueue_[kA].remove({b, a});
            edgeQueue_[kB].remove({a, b});
            edgeQueue_[kB].remove({b, a});
            bool structural = false;
            auto &ma = records_[a].meets;
            if (auto it = std::find(ma.begin(), ma.end(), b); it != ma.end())
            {
                ma.erase(it);
                auto &mb = records_[b].meets;
                mb.erase(std::find(mb.begin(), mb.end(), a));
                structural = true;
            }
            for (int q = 0; q < 2; ++q)
            {
                if (records_[a].via[q] == b)
                    invalidateProp(q, {a});
                if (records_[b].via[q] == a)
                    invalidateProp(q, {b});
            }
            bool repaired = false;
            for (int q : lazyRoles())
            {
                if (records_[b].lazy[q].parent == a)
                {
                    updateLazySearch(q, a, b);
                    repaired = true;
                }
                else if (records_[a].lazy[q].parent == b)
                {
                    updateLazySearch(q, b, a);
                    repaired = true;
                }
            }
            if (structural && !repaired)
            {
                ++counters_.repairEvents;
                log(EventType::Repair, -1, a, b, 0.0);
            }
        }

        /**
         * The lazy link xp -> xc of role q collided: reset the whole lazy subtree below xc, drop its
         * meets and everything propagated through it, then let update_state rebuild it.
         */
        void updateLazySearch(int q, Id xp, Id xc)
        {
            ++counters_.repairEvents;
            setLazyParent(q, xc, kNoId);
            std::vector<Id> subtree{xc};
            for (std::size_t i = 0; i < subtree.size(); ++i)
                for (Id ch : records_[subtree[i]].lazy[q].children)
                    subtree.push_back(ch);
            counters_.repairFootprint += subtree.size();
            log(EventType::Repair, q, xp, xc, static_cast<double>(subtree.size()));

            std::vector<Id> propStarts;
            for (Id s : subtree)
            {
                LazyData &L = records_[s].lazy[q];
                L.rhs = kInf;
                L.g = kInf;
                L.parent = kNoId;
                L.children.clear();
                lazyQueue_[q].remove(s);
                for (Id e : records_[s].dependents[q])
                    propStarts.push_back(e);
            }
            for (Id s : subtree)
            {
                rekeyInto(opposite(q), s);
                for (Id w : records_[s].meets)
                {
                    auto &m = records_[w].meets;
                    m.erase(std::find(m.begin(), m.end(), s));
                }
                records_[s].meets.clear();
            }
            invalidateProp(opposite(q), subtree);
            invalidateProp(q, propStarts);
            for (Id s : subtree)
            {
                VertexRecord &v = records_[s];
                if (!v.root[q] && !std::isfinite(v.lazy[q].seed))
                    v.owner = -1;
            }
            for (Id s : subtree)
                updateState(q, s);
            if (bidirectional())
                for (Id s : subtree)
                    if (records_[s].owner == -1)
                        updateState(opposite(q), s);
        }

        ProblemDef p_;
        PlannerConfig cfg_;
        Mode mode_;
        double res_{0.001};
        NeighborIndex index_;
        Rng rng_;
        std::vector<VertexRecord> records_;
        std::vector<std::vector<Id>> adj_;
        std::vector<std::vector<double>> adjCost_;  // ĉ along adj_
        std::array<std::vector<Id>, 2> roots_;
        std::array<VertexQueue, 2> lazyQueue_;
        std::array<EdgeQueue, 2> edgeQueue_;
        std::set<std::pair<Id, Id>> validMeets_;  // (tree-A end, tree-B end)
        std::unordered_set<std::uint64_t> blacklist_;
        std::unordered_set<std::uint64_t> whitelist_;
        std::vector<std::uint32_t> mark_;
        std::uint32_t stamp_{0};
        int active_{kA};
        double cCur_{kInf};
        std::vector<StateVec> bestPath_;
        std::vector<Solution> solutions_;
        Counters counters_;
        EventLog events_;
        bool saturated_{false};
        std::chrono::steady_clock::time_point clock0_;
    };

    /** BiAIT*: both lazy searches, both valid searches, alternating roles. */
    class BiAITstar : public LazyPlanner
    {
    public:
        BiAITstar(ProblemDef problem, PlannerConfig cfg)
          : LazyPlanner(std::move(problem), std::move(cfg), Mode::Bidirectional)
        {
        }
    };
}  // namespace biait
