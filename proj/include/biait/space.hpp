// Point-robot planning instance in R^d: bounds, obstacles, validity and costs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace biait
{
    using StateVec = std::vector<double>;

    inline constexpr double kInf = std::numeric_limits<double>::infinity();

    /** Raised for malformed inputs (dimension mismatch, empty path, bad problem). */
    class UsageError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct Bounds
    {
        StateVec lo;
        StateVec hi;
    };

    struct Obstacle
    {
        enum class Kind
        {
            Aabb,
            Sphere
        };

        Kind kind{Kind::Aabb};
        StateVec min;  // aabb
        StateVec max;  // aabb
        StateVec center;  // sphere
        double radius{0.0};  // sphere

        static Obstacle aabb(StateVec lo, StateVec hi)
        {
            Obstacle o;
            o.kind = Kind::Aabb;
            o.min = std::move(lo);
            o.max = std::move(hi);
            return o;
        }

        static Obstacle sphere(StateVec c, double r)
        {
            Obstacle o;
            o.kind = Kind::Sphere;
            o.center = std::move(c);
            o.radius = r;
            return o;
        }

        /** Closed set: the boundary collides. */
        bool contains(const StateVec &x) const
        {
            if (kind == Kind::Aabb)
            {
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (x[i] < min[i] || x[i] > max[i])
                        return false;
                return true;
            }
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                d2 += (x[i] - center[i]) * (x[i] - center[i]);
            return d2 <= radius * radius;
        }

        /** Conservative box around the obstacle, used to skip irrelevant obstacles. */
        void box(StateVec &lo, StateVec &hi) const
        {
            if (kind == Kind::Aabb)
            {
                lo = min;
                hi = max;
                return;
            }
            lo.resize(center.size());
            hi.resize(center.size());
            for (std::size_t i = 0; i < center.size(); ++i)
            {
                lo[i] = center[i] - radius;
                hi[i] = center[i] + radius;
            }
        }
    };

    struct ProblemDef
    {
        std::size_t dim{2};
        Bounds bounds;
        StateVec start;
        std::vector<StateVec> goals;
        std::vector<Obstacle> obstacles;
        double resolution{0.001};
    };

    inline void checkDim(const ProblemDef &p, const StateVec &x)
    {
        if (x.size() != p.dim)
            throw UsageError("state has dimension " + std::to_string(x.size()) + ", expected " +
                             std::to_string(p.dim));
    }

    inline bool inBounds(const ProblemDef &p, const StateVec &x)
    {
        for (std::size_t i = 0; i < p.dim; ++i)
            if (x[i] < p.bounds.lo[i] || x[i] > p.bounds.hi[i])
                return false;
        return true;
    }

    inline bool stateValid(const ProblemDef &p, const StateVec &x)
    {
        checkDim(p, x);
        if (!inBounds(p, x))
            return false;
        for (const auto &o : p.obstacles)
            if (o.contains(x))
                return false;
        return true;
    }

    inline double euclidCost(const StateVec &a, const StateVec &b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }

    /**
     * Discrete motion check at t = 0, res, 2res, ..., 1 (t = 1 always included).
     * Bounds are convex, so only the endpoints are tested against them; obstacles whose
     * box does not overlap the segment's box are skipped.
     */
    inline bool motionValid(const ProblemDef &p, const StateVec &a, const StateVec &b, double resolution)
    {
        if (!stateValid(p, a) || !stateValid(p, b))
            return false;
        checkDim(p, b);
        const std::size_t d = p.dim;
        StateVec segLo(d), segHi(d), oLo, oHi, x(d);
        for (std::size_t i = 0; i < d; ++i)
        {
            segLo[i] = std::min(a[i], b[i]);
            segHi[i] = std::max(a[i], b[i]);
        }
        const std::size_t steps = static_cast<std::size_t>(std::ceil(1.0 / resolution - 1e-12));
        for (const auto &o : p.obstacles)
        {
            o.box(oLo, oHi);
            bool overlap = true;
            for (std::size_t i = 0; i < d && overlap; ++i)
                overlap = !(segHi[i] < oLo[i] || segLo[i] > oHi[i]);
            if (!overlap)
                continue;
            for (std::size_t s = 1; s < steps; ++s)
            {
                const double t = static_cast<double>(s) * resolution;
                for (std::size_t i = 0; i < d; ++i)
                    x[i] = a[i] + t * (b[i] - a[i]);
                if (o.contains(x))
                    return false;
            }
        }
        return true;
    }

    inline bool motionValid(const ProblemDef &p, const StateVec &a, const StateVec &b)
    {
        return motionValid(p, a, b, p.resolution);
    }

    /** Exact test: the closed segment [a, b] touches no obstacle. */
    inline bool segmentClear(const ProblemDef &p, const StateVec &a, const StateVec &b)
    {
        checkDim(p, a);
        checkDim(p, b);
        for (const auto &o : p.obstacles)
        {
            if (o.kind == Obstacle::Kind::Aabb)
            {
                // slab clipping of t in [0, 1]
                double t0 = 0.0, t1 = 1.0;
                bool hit = true;
                for (std::size_t i = 0; i < p.dim && hit; ++i)
                {
                    const double d = b[i] - a[i];
                    if (d == 0.0)
                    {
                        hit = a[i] >= o.min[i] && a[i] <= o.max[i];
                        continue;
                    }
                    double lo = (o.min[i] - a[i]) / d;
                    double hi = (o.max[i] - a[i]) / d;
                    if (lo > hi)
                        std::swap(lo, hi);
                    t0 = std::max(t0, lo);
                    t1 = std::min(t1, hi);
                    hit = t0 <= t1;
                }
                if (hit)
                    return false;
            }
            else
            {
                double dd = 0.0, dc = 0.0;
                for (std::size_t i = 0; i < p.dim; ++i)
                {
                    dd += (b[i] - a[i]) * (b[i] - a[i]);
                    dc += (o.center[i] - a[i]) * (b[i] - a[i]);
                }
                const double t = dd > 0.0 ? std::clamp(dc / dd, 0.0, 1.0) : 0.0;
                double d2 = 0.0;
                for (std::size_t i = 0; i < p.dim; ++i)
                {
                    const double c = a[i] + t * (b[i] - a[i]) - o.center[i];
                    d2 += c * c;
                }
                if (d2 <= o.radius * o.radius)
                    return false;
            }
        }
        return true;
    }

    /** (ĝ_F, ĝ_R): distance to the start and minimum distance to the goal set. */
    inline std::pair<double, double> heuristicBounds(const ProblemDef &p, const StateVec &x)
    {
        checkDim(p, x);
        double toGoal = kInf;
        for (const auto &g : p.goals)
            toGoal = std::min(toGoal, euclidCost(x, g));
        return {euclidCost(x, p.start), toGoal};
    }

    inline double pathCost(const std::vector<StateVec> &path)
    {
        if (path.empty())
            throw UsageError("empty path");
        double c = 0.0;
        for (std::size_t i = 1; i < path.size(); ++i)
            c += euclidCost(path[i - 1], path[i]);
        return c;
    }

    /** Throws UsageError naming the offending field. */
    inline void validateProblem(const ProblemDef &p)
    {
        if (p.dim == 0)
            throw UsageError("dim: must be positive");
        if (p.bounds.lo.size() != p.dim || p.bounds.hi.size() != p.dim)
            throw UsageError("bounds: dimension mismatch");
        for (std::size_t i = 0; i < p.dim; ++i)
            if (!(p.bounds.lo[i] < p.bounds.hi[i]))
                throw UsageError("bounds: lo must be below hi");
        if (!(p.resolution > 0.0 && p.resolution <= 1.0))
            throw UsageError("resolution: must lie in (0, 1]");
        for (const auto &o : p.obstacles)
        {
            if (o.kind == Obstacle::Kind::Aabb)
            {
                if (o.min.size() != p.dim || o.max.size() != p.dim)
                    throw UsageError("obstacles: aabb dimension mismatch");
                for (std::size_t i = 0; i < p.dim; ++i)
                    if (o.min[i] > o.max[i])
                        throw UsageError("obstacles: aabb min exceeds max");
            }
            else
            {
                if (o.center.size() != p.dim)
                    throw UsageError("obstacles: sphere dimension mismatch");
                if (!(o.radius > 0.0))
                    throw UsageError("obstacles: sphere radius must be positive");
            }
        }
        if (p.start.size() != p.dim)
            throw UsageError("start: dimension mismatch");
        if (!stateValid(p, p.start))
            throw UsageError("start: outside bounds or in collision");
        if (p.goals.empty())
            throw UsageError("goals: at least one goal required");
        for (const auto &g : p.goals)
        {
            if (g.size() != p.dim)
                throw UsageError("goals: dimension mismatch");
            if (!stateValid(p, g))
                throw UsageError("goals: outside bounds or in collision");
        }
    }
}  // namespace biait
