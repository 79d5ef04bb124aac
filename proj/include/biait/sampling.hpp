// Batch samplers: uniform, direct informed, near-path, and the batch-size schedule.
#pragma once

#include <biait/space.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace biait
{
    using Rng = std::mt19937_64;

    /** A draw needed more than kMaxRejections consecutive rejections. */
    class SpaceSaturated : public std::runtime_error
    {
    public:
        SpaceSaturated() : std::runtime_error("space saturated") {}
    };

    inline constexpr int kMaxRejections = 10000;

    struct VariationalSchedule
    {
        std::size_t init{10};
        double alpha{1.5};
        std::size_t cap{100000};
    };

    struct SamplerConfig
    {
        std::size_t batchSize{100};
        std::optional<VariationalSchedule> variational;
        double pNear{0.0};
        double nearSigmaFrac{0.05};
        std::uint64_t seed{1};
    };

    inline double uniform01(Rng &rng)
    {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }

    inline StateVec sampleUniform(const ProblemDef &p, Rng &rng)
    {
        StateVec x(p.dim);
        for (int attempt = 0; attempt < kMaxRejections; ++attempt)
        {
            for (std::size_t i = 0; i < p.dim; ++i)
                x[i] = std::uniform_real_distribution<double>(p.bounds.lo[i], p.bounds.hi[i])(rng);
            if (stateValid(p, x))
                return x;
        }
        throw SpaceSaturated();
    }

    inline bool inInformedSet(const ProblemDef &p, const StateVec &x, double cCur)
    {
        const auto [f, r] = heuristicBounds(p, x);
        return f + r <= cCur + 1e-9;
    }

    /** Uniform point in the unit d-ball. */
    inline StateVec sampleUnitBall(std::size_t d, Rng &rng)
    {
        std::normal_distribution<double> n01(0.0, 1.0);
        StateVec v(d);
        double norm = 0.0;
        do
        {
            norm = 0.0;
            for (auto &c : v)
            {
                c = n01(rng);
                norm += c * c;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(d));
        for (auto &c : v)
            c *= r / norm;
        return v;
    }

    /**
     * Uniform sample of {x valid : ĝ_F(x) + ĝ_R(x) <= cCur}. Direct prolate-hyperspheroid sampling
     * for a single goal, rejection from the bounds otherwise.
     */
    inline StateVec sampleInformed(const ProblemDef &p, double cCur, Rng &rng)
    {
        if (!std::isfinite(cCur))
            return sampleUniform(p, rng);
        const std::size_t d = p.dim;
        if (p.goals.size() != 1)
        {
            StateVec x(d);
            for (int attempt = 0; attempt < kMaxRejections; ++attempt)
            {
                for (std::size_t i = 0; i < d; ++i)
                    x[i] = std::uniform_real_distribution<double>(p.bounds.lo[i], p.bounds.hi[i])(rng);
                if (inInformedSet(p, x, cCur) && stateValid(p, x))
                    return x;
            }
            throw SpaceSaturated();
        }

        const StateVec &s = p.start;
        const StateVec &g = p.goals.front();
        const double cMin = euclidCost(s, g);
        StateVec x(d);
        if (cCur <= cMin)
        {
            // degenerate set: the focal segment itself
            for (int attempt = 0; attempt < kMaxRejections; ++attempt)
            {
                const double t = uniform01(rng);
                for (std::size_t i = 0; i < d; ++i)
                    x[i] = s[i] + t * (g[i] - s[i]);
                if (stateValid(p, x))
                    return x;
            }
            throw SpaceSaturated();
        }

        const double a = cCur / 2.0;
        const double b = std::sqrt(cCur * cCur - cMin * cMin) / 2.0;
        // Householder reflection taking e1 onto the focal axis.
        StateVec axis(d), v(d), centre(d);
        for (std::size_t i = 0; i < d; ++i)
        {
            axis[i] = cMin > 0.0 ? (g[i] - s[i]) / cMin : (i == 0 ? 1.0 : 0.0);
            centre[i] = 0.5 * (s[i] + g[i]);
            v[i] = (i == 0 ? 1.0 : 0.0) - axis[i];
        }
        double vv = 0.0;
        for (double c : v)
            vv += c * c;

        for (int attempt = 0; attempt < kMaxRejections; ++attempt)
        {
            StateVec u = sampleUnitBall(d, rng);
            u[0] *= a;
            for (std::size_t i = 1; i < d; ++i)
                u[i] *= b;
            double vu = 0.0;
            if (vv > 1e-24)
                for (std::size_t i = 0; i < d; ++i)
                    vu += v[i] * u[i];
            for (std::size_t i = 0; i < d; ++i)
                x[i] = centre[i] + u[i] - (vv > 1e-24 ? 2.0 * vu / vv * v[i] : 0.0);
            if (inInformedSet(p, x, cCur) && stateValid(p, x))
                return x;
        }
        throw SpaceSaturated();
    }

    /**
     * Point drawn uniformly by arc length on the path, perturbed by isotropic Gaussian noise with
     * std-dev sigmaFrac * cCur / 2, kept only inside the informed set. Falls back to sampleInformed
     * after kMaxRejections rejections.
     */
    inline StateVec sampleNearPath(const ProblemDef &p, const std::vector<StateVec> &path, double cCur,
                                   double sigmaFrac, Rng &rng)
    {
        if (path.empty())
            return sampleInformed(p, cCur, rng);
        const std::size_t d = p.dim;
        std::vector<double> cumulative(path.size(), 0.0);
        for (std::size_t i = 1; i < path.size(); ++i)
            cumulative[i] = cumulative[i - 1] + euclidCost(path[i - 1], path[i]);
        const double total = cumulative.back();
        const double scale = std::isfinite(cCur) ? cCur : total;
        std::normal_distribution<double> noise(0.0, 1.0);
        const double sigma = sigmaFrac * scale / 2.0;

        StateVec x(d);
        for (int attempt = 0; attempt < kMaxRejections; ++attempt)
        {
            const double s = uniform01(rng) * total;
            std::size_t seg = 1;
            while (seg + 1 < path.size() && cumulative[seg] < s)
                ++seg;
            if (path.size() == 1)
                x = path.front();
            else
            {
                const double len = cumulative[seg] - cumulative[seg - 1];
                const double t = len > 0.0 ? (s - cumulative[seg - 1]) / len : 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    x[i] = path[seg - 1][i] + t * (path[seg][i] - path[seg - 1][i]);
            }
            for (std::size_t i = 0; i < d; ++i)
                x[i] += sigma * noise(rng);
            if ((!std::isfinite(cCur) || inInformedSet(p, x, cCur)) && stateValid(p, x))
                return x;
        }
        return sampleInformed(p, cCur, rng);
    }

    /** Round-half-up of init * (1 + alpha)^n capped at cap; batchSize when unset. */
    inline std::size_t batchSchedule(const SamplerConfig &cfg, std::size_t n)
    {
        if (!cfg.variational)
            return cfg.batchSize;
        const auto &v = *cfg.variational;
        const double raw = static_cast<double>(v.init) * std::pow(1.0 + v.alpha, static_cast<double>(n));
        const double rounded = std::floor(raw + 0.5);
        if (!(rounded < static_cast<double>(v.cap)))
            return v.cap;
        return static_cast<std::size_t>(rounded);
    }

    /** Batch n: each draw is near-path with probability pNear when a path exists, informed otherwise. */
    inline std::vector<StateVec> sampleBatch(const ProblemDef &p, const SamplerConfig &cfg, std::size_t n,
                                             double cCur, const std::vector<StateVec> &path, Rng &rng,
                                             std::size_t *nearDraws = nullptr)
    {
        const std::size_t count = batchSchedule(cfg, n);
        std::vector<StateVec> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            if (cfg.pNear > 0.0 && !path.empty() && uniform01(rng) < cfg.pNear)
            {
                out.push_back(sampleNearPath(p, path, cCur, cfg.nearSigmaFrac, rng));
                if (nearDraws)
                    ++*nearDraws;
            }
            else
                out.push_back(sampleInformed(p, cCur, rng));
        }
        return out;
    }
}  // namespace biait
