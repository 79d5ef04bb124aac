// Seeded trials, metrics, traces and CSV output.
#pragma once

#include <biait/planner_ait.hpp>
#include <biait/planner_biait.hpp>
#include <biait/scenario.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace biait
{
    struct TrialMetrics
    {
        std::string planner;
        std::string world;
        std::uint64_t seed{0};
        std::size_t batchSize{0};
        std::optional<double> tInitMs;
        std::optional<double> cInit;
        std::optional<double> tBestMs;
        std::optional<double> cBest;
        std::size_t nCollisionChecks{0};
        std::size_t nLazyPopsA{0};
        std::size_t nLazyPopsB{0};
        std::size_t nEdgePops{0};
        std::size_t nSamples{0};
        std::size_t nRepairEvents{0};
        std::size_t repairFootprintTotal{0};
        std::string status{"failed"};
        // not part of the CSV schema
        std::optional<std::size_t> lazyPopsBeforeFiniteEdge;

        std::size_t nLazyPops() const { return nLazyPopsA + nLazyPopsB; }
    };

    struct TrialResult
    {
        TrialMetrics metrics;
        PlanResult result;
        json trace;
    };

    inline const char *kCsvHeader =
        "planner,world,seed,batch_size,t_init_ms,c_init,t_best_ms,c_best,n_collision_checks,n_lazy_pops_a,"
        "n_lazy_pops_b,n_edge_pops,n_samples,n_repair_events,repair_footprint_total,status";

    inline std::unique_ptr<LazyPlanner> makePlanner(const std::string &name, const ProblemDef &p, const PlannerConfig &cfg)
    {
        if (name == "biait")
            return std::make_unique<BiAITstar>(p, cfg);
        if (name == "ait")
            return std::make_unique<AITstar>(p, cfg);
        throw UsageError("unknown planner \"" + name + "\" (expected biait or ait)");
    }

    /** Snapshot of the final planner state for SVG rendering. */
    inline json snapshot(const LazyPlanner &pl)
    {
        json samples = json::array();
        json lazy = json::array({json::array(), json::array()});
        json valid = json::array({json::array(), json::array()});
        for (Id id = 0; id < pl.vertexCount(); ++id)
        {
            const VertexRecord &v = pl.vertex(id);
            if (!v.alive)
                continue;
            samples.push_back({{"id", id}, {"x", v.state}});
            for (int r = 0; r < 2; ++r)
            {
                if (v.lazy[r].parent != kNoId)
                    lazy[r].push_back({v.lazy[r].parent, id});
                if (v.tree[r].parent != kNoId)
                    valid[r].push_back({v.tree[r].parent, id});
            }
        }
        return {{"samples", samples}, {"lazy", lazy}, {"valid", valid}};
    }

    inline json eventsToJson(const EventLog &log)
    {
        json out = json::array();
        for (const auto &e : log)
            out.push_back({{"type", eventName(e.type)}, {"role", e.role}, {"a", e.a}, {"b", e.b},
                           {"value", std::isfinite(e.value) ? json(e.value) : json(nullptr)}, {"t_ms", e.tMs}});
        return out;
    }

    inline json metricsToJson(const TrialMetrics &m)
    {
        auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
        return {{"planner", m.planner},
                {"world", m.world},
                {"seed", m.seed},
                {"batch_size", m.batchSize},
                {"t_init_ms", opt(m.tInitMs)},
                {"c_init", opt(m.cInit)},
                {"t_best_ms", opt(m.tBestMs)},
                {"c_best", opt(m.cBest)},
                {"n_collision_checks", m.nCollisionChecks},
                {"n_lazy_pops_a", m.nLazyPopsA},
                {"n_lazy_pops_b", m.nLazyPopsB},
                {"n_edge_pops", m.nEdgePops},
                {"n_samples", m.nSamples},
                {"n_repair_events", m.nRepairEvents},
                {"repair_footprint_total", m.repairFootprintTotal},
                {"status", m.status}};
    }

    /** Scenario overrides first, then the caller's configuration on top. */
    inline PlannerConfig configFor(const Scenario &s, const PlannerConfig &base, const json &cliOverrides = json::object())
    {
        PlannerConfig cfg = base;
        applyOverrides(cfg, s.planner);
        applyOverrides(cfg, cliOverrides);
        return cfg;
    }

    inline TrialResult runTrial(const Scenario &s, const std::string &planner, PlannerConfig cfg, std::uint64_t seed,
                                bool withTrace = false)
    {
        cfg.sampler.seed = seed;
        auto pl = makePlanner(planner, s.problem, cfg);
        TrialResult out;
        out.result = pl->solve();
        TrialMetrics &m = out.metrics;
        m.planner = planner;
        m.world = s.name;
        m.seed = seed;
        m.batchSize = cfg.sampler.variational ? cfg.sampler.variational->init : cfg.sampler.batchSize;
        const auto &sols = out.result.solutions;
        if (!sols.empty())
        {
            m.tInitMs = sols.front().foundAtMs;
            m.cInit = sols.front().cost;
            m.tBestMs = sols.back().foundAtMs;
            m.cBest = sols.back().cost;
        }
        const Counters &c = out.result.counters;
        m.nCollisionChecks = c.collisionChecks;
        m.nLazyPopsA = c.lazyPops[kA];
        m.nLazyPopsB = c.lazyPops[kB];
        m.nEdgePops = c.edgePops;
        m.nSamples = c.samples;
        m.nRepairEvents = c.repairEvents;
        m.repairFootprintTotal = c.repairFootprint;
        m.status = statusName(out.result.status);
        m.lazyPopsBeforeFiniteEdge = c.lazyPopsBeforeFiniteEdge;
        if (withTrace)
        {
            json sol = json::array();
            for (const auto &x : sols)
                sol.push_back({{"cost", x.cost}, {"t_ms", x.foundAtMs}, {"path", x.path}});
            out.trace = {{"scenario", toJson(s)},
                         {"planner", planner},
                         {"seed", seed},
                         {"metrics", metricsToJson(m)},
                         {"solutions", sol},
                         {"events", eventsToJson(pl->events())},
                         {"snapshot", snapshot(*pl)}};
        }
        return out;
    }

    inline std::string formatNumber(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    inline std::string csvRow(const TrialMetrics &m)
    {
        auto opt = [](const std::optional<double> &v) { return v ? formatNumber(*v) : std::string(); };
        std::ostringstream o;
        o << m.planner << ',' << m.world << ',' << m.seed << ',' << m.batchSize << ',' << opt(m.tInitMs) << ','
          << opt(m.cInit) << ',' << opt(m.tBestMs) << ',' << opt(m.cBest) << ',' << m.nCollisionChecks << ','
          << m.nLazyPopsA << ',' << m.nLazyPopsB << ',' << m.nEdgePops << ',' << m.nSamples << ',' << m.nRepairEvents
          << ',' << m.repairFootprintTotal << ',' << m.status;
        return o.str();
    }

    /** Inverse of csvRow. */
    inline TrialMetrics parseCsvRow(const std::string &line)
    {
        std::vector<std::string> f;
        std::string cell;
        std::istringstream in(line);
        while (std::getline(in, cell, ','))
            f.push_back(cell);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 16)
            throw UsageError("csv row has " + std::to_string(f.size()) + " fields, expected 16");
        auto opt = [](const std::string &s) -> std::optional<double> {
            if (s.empty())
                return std::nullopt;
            return std::stod(s);
        };
        TrialMetrics m;
        m.planner = f[0];
        m.world = f[1];
        m.seed = std::stoull(f[2]);
        m.batchSize = std::stoul(f[3]);
        m.tInitMs = opt(f[4]);
        m.cInit = opt(f[5]);
        m.tBestMs = opt(f[6]);
        m.cBest = opt(f[7]);
        m.nCollisionChecks = std::stoul(f[8]);
        m.nLazyPopsA = std::stoul(f[9]);
        m.nLazyPopsB = std::stoul(f[10]);
        m.nEdgePops = std::stoul(f[11]);
        m.nSamples = std::stoul(f[12]);
        m.nRepairEvents = std::stoul(f[13]);
        m.repairFootprintTotal = std::stoul(f[14]);
        m.status = f[15];
        return m;
    }

    /** Linear-interpolation quantile of a non-empty sample. */
    inline double quantile(std::vector<double> v, double q)
    {
        if (v.empty())
            return std::numeric_limits<double>::quiet_NaN();
        std::sort(v.begin(), v.end());
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    }

    inline double median(const std::vector<double> &v) { return quantile(v, 0.5); }

    struct BenchSummary
    {
        std::string planner;
        std::size_t trials{0};
        std::size_t solved{0};
        std::array<double, 3> tInit{};  // q1, median, q3 over solved trials
        std::array<double, 3> cInit{};
    };

    inline std::vector<BenchSummary> summarize(const std::vector<TrialMetrics> &rows, const std::vector<std::string> &planners)
    {
        std::vector<BenchSummary> out;
        for (const auto &name : planners)
        {
            BenchSummary s;
            s.planner = name;
            std::vector<double> t, c;
            for (const auto &m : rows)
            {
                if (m.planner != name)
                    continue;
                ++s.trials;
                if (m.tInitMs)
                {
                    ++s.solved;
                    t.push_back(*m.tInitMs);
                    c.push_back(*m.cInit);
                }
            }
            for (int i = 0; i < 3; ++i)
            {
                s.tInit[i] = quantile(t, 0.25 * (i + 1));
                s.cInit[i] = quantile(c, 0.25 * (i + 1));
            }
            out.push_back(s);
        }
        return out;
    }

    /** Summary lines are '#'-prefixed so the data rows stay a plain CSV. */
    inline std::string summaryLine(const BenchSummary &s)
    {
        std::ostringstream o;
        o << "# summary,planner=" << s.planner << ",trials=" << s.trials << ",solved=" << s.solved
          << ",t_init_q1=" << formatNumber(s.tInit[0]) << ",t_init_median=" << formatNumber(s.tInit[1])
          << ",t_init_q3=" << formatNumber(s.tInit[2]) << ",c_init_q1=" << formatNumber(s.cInit[0])
          << ",c_init_median=" << formatNumber(s.cInit[1]) << ",c_init_q3=" << formatNumber(s.cInit[2]);
        return o.str();
    }

    /** One trial per (planner, seed), planner-major; trials run on up to `parallel` worker threads. */
    inline std::vector<TrialMetrics> runBench(const Scenario &s, const std::vector<std::string> &planners,
                                              std::uint64_t seedLo, std::uint64_t seedHi, const PlannerConfig &cfg,
                                              std::size_t parallel = 1)
    {
        for (const auto &p : planners)
            makePlanner(p, s.problem, cfg);
        std::vector<std::pair<std::string, std::uint64_t>> jobs;
        for (const auto &p : planners)
            for (std::uint64_t seed = seedLo; seed <= seedHi; ++seed)
                jobs.emplace_back(p, seed);
        std::vector<TrialMetrics> rows(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
                rows[i] = runTrial(s, jobs[i].first, cfg, jobs[i].second).metrics;
        };
        const std::size_t n = std::max<std::size_t>(1, std::min(parallel, jobs.size()));
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < n; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto &t : pool)
            t.join();
        return rows;
    }

    inline void writeCsv(const std::string &path, const std::vector<TrialMetrics> &rows, const std::vector<std::string> &planners)
    {
        std::ofstream out(path);
        if (!out)
            throw UsageError("cannot write " + path);
        out << kCsvHeader << "\n";
        for (const auto &m : rows)
            out << csvRow(m) << "\n";
        for (const auto &s : summarize(rows, planners))
            out << summaryLine(s) << "\n";
    }
}  // namespace biait
