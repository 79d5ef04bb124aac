// Command-line front end: run, bench, emit-svg, worlds.
#include <biait/bench.hpp>
#include <biait/svg.hpp>
#include <biait/worlds.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <thread>

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitUsage = 2;
    constexpr int kExitNoSolution = 3;

    struct ProblemArgs
    {
        std::string scenario;
        std::string world;
        std::size_t dim{2};
        std::uint64_t mazeSeed{1};
    };

    struct TuningArgs
    {
        double timeBudgetMs{0.0};
        std::optional<double> targetCost;
        std::optional<std::size_t> batchSize;
        std::string variational;
        std::optional<double> pNear;
        std::optional<std::size_t> maxBatches;
    };

    void addProblemOptions(CLI::App *cmd, ProblemArgs &a)
    {
        auto *f = cmd->add_option("--scenario", a.scenario, "Scenario JSON file");
        auto *w = cmd->add_option("--world", a.world, "Built-in world name (see `worlds`)");
        f->excludes(w);
        cmd->add_option("--dim", a.dim, "Dimension for empty-d")->capture_default_str();
        cmd->add_option("--maze-seed", a.mazeSeed, "Generator seed for maze2d")->capture_default_str();
    }

    void addTuningOptions(CLI::App *cmd, TuningArgs &t, bool budgetRequired)
    {
        auto *b = cmd->add_option("--time-budget-ms", t.timeBudgetMs, "Wall-clock budget per trial");
        if (budgetRequired)
            b->required();
        else
        {
            t.timeBudgetMs = 1000.0;
            b->capture_default_str();
        }
        cmd->add_option("--target-cost", t.targetCost, "Stop once the best cost is at most this value");
        cmd->add_option("--batch-size", t.batchSize, "Samples per batch");
        cmd->add_option("--variational", t.variational, "Variational batches as INIT,ALPHA");
        cmd->add_option("--p-near", t.pNear, "Probability of near-path draws after the first solution");
        cmd->add_option("--max-batches", t.maxBatches, "Stop after this many batches");
    }

    biait::Scenario resolveScenario(const ProblemArgs &a)
    {
        if (!a.scenario.empty())
            return biait::loadScenario(a.scenario);
        if (!a.world.empty())
            return biait::builtinWorld(a.world, {a.dim, a.mazeSeed});
        throw biait::UsageError("one of --scenario or --world is required");
    }

    biait::json tuningOverrides(const TuningArgs &t)
    {
        biait::json o = biait::json::object();
        o["time_budget_ms"] = t.timeBudgetMs;
        if (t.targetCost)
            o["target_cost"] = *t.targetCost;
        if (t.batchSize)
            o["batch_size"] = *t.batchSize;
        if (t.pNear)
            o["p_near"] = *t.pNear;
        if (t.maxBatches)
            o["max_batches"] = *t.maxBatches;
        if (!t.variational.empty())
        {
            const auto comma = t.variational.find(',');
            if (comma == std::string::npos)
                throw biait::UsageError("--variational expects INIT,ALPHA");
            try
            {
                o["variational"] = {{"init", std::stoul(t.variational.substr(0, comma))},
                                    {"alpha", std::stod(t.variational.substr(comma + 1))}};
            }
            catch (const std::logic_error &)
            {
                throw biait::UsageError("--variational expects INIT,ALPHA");
            }
            if (o["variational"]["init"].get<std::size_t>() == 0 || o["variational"]["alpha"].get<double>() <= 1.0)
                throw biait::UsageError("--variational needs INIT > 0 and ALPHA > 1");
        }
        if (t.timeBudgetMs <= 0.0)
            throw biait::UsageError("--time-budget-ms must be positive");
        return o;
    }

    std::pair<std::uint64_t, std::uint64_t> parseSeeds(const std::string &s)
    {
        const auto dots = s.find("..");
        try
        {
            if (dots == std::string::npos)
            {
                const auto v = std::stoull(s);
                return {v, v};
            }
            const auto lo = std::stoull(s.substr(0, dots));
            const auto hi = std::stoull(s.substr(dots + 2));
            if (lo > hi)
                throw biait::UsageError("--seeds range is empty");
            return {lo, hi};
        }
        catch (const std::logic_error &)
        {
            throw biait::UsageError("--seeds expects A..B");
        }
    }

    std::vector<std::string> splitList(const std::string &s)
    {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s + ",")
        {
            if (ch == ',')
            {
                if (!cur.empty())
                    out.push_back(cur);
                cur.clear();
            }
            else
                cur += ch;
        }
        return out;
    }

    std::string fmtOpt(const std::optional<double> &v)
    {
        return v ? biait::formatNumber(*v) : std::string("-");
    }
}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"BiAIT* / AIT* planners and benchmark harness"};
    app.require_subcommand(1);

    ProblemArgs runProblem;
    TuningArgs runTuning;
    std::string runPlanner = "biait";
    std::uint64_t runSeed = 1;
    std::string runOut;
    auto *run = app.add_subcommand("run", "Run one seeded trial and write its trace");
    addProblemOptions(run, runProblem);
    addTuningOptions(run, runTuning, true);
    run->add_option("--planner", runPlanner, "biait or ait")->check(CLI::IsMember({"biait", "ait"}))->capture_default_str();
    run->add_option("--seed", runSeed, "Sampler seed")->capture_default_str();
    run->add_option("--out", runOut, "Trace JSON output path");

    ProblemArgs benchProblem;
    TuningArgs benchTuning;
    std::string benchPlanners = "biait,ait";
    std::string benchSeeds = "1..10";
    std::size_t benchParallel = std::max(1u, std::thread::hardware_concurrency());
    std::string benchCsv;
    auto *bench = app.add_subcommand("bench", "Run seeded trials per planner and write a CSV");
    addProblemOptions(bench, benchProblem);
    addTuningOptions(bench, benchTuning, false);
    bench->add_option("--planners", benchPlanners, "Comma-separated planner list")->capture_default_str();
    bench->add_option("--seeds", benchSeeds, "Seed range A..B")->capture_default_str();
    bench->add_option("--trials-parallel", benchParallel, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--csv", benchCsv, "CSV output path")->required();

    std::string svgTrace;
    std::string svgOut;
    auto *svg = app.add_subcommand("emit-svg", "Render a 2D trace as SVG");
    svg->add_option("--trace", svgTrace, "Trace JSON written by `run`")->required();
    svg->add_option("--out", svgOut, "SVG output path")->required();

    std::string writeDir;
    auto *worlds = app.add_subcommand("worlds", "List built-in worlds");
    worlds->add_option("--write", writeDir, "Also write each 2D world and empty-2 as a scenario file into this directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitUsage;
    }

    try
    {
        if (*run)
        {
            const biait::Scenario s = resolveScenario(runProblem);
            const biait::PlannerConfig cfg = biait::configFor(s, {}, tuningOverrides(runTuning));
            const biait::TrialResult t = biait::runTrial(s, runPlanner, cfg, runSeed, true);
            const auto &m = t.metrics;
            std::cout << "planner=" << m.planner << " world=" << m.world << " seed=" << m.seed << " status=" << m.status
                      << " t_init_ms=" << fmtOpt(m.tInitMs) << " c_init=" << fmtOpt(m.cInit)
                      << " c_best=" << fmtOpt(m.cBest) << " lazy_pops=" << m.nLazyPops()
                      << " collision_checks=" << m.nCollisionChecks << "\n";
            if (!runOut.empty())
            {
                std::ofstream out(runOut);
                if (!out)
                    throw biait::UsageError("cannot write " + runOut);
                out << t.trace.dump() << "\n";
            }
            return t.result.solutions.empty() ? kExitNoSolution : kExitOk;
        }
        if (*bench)
        {
            const biait::Scenario s = resolveScenario(benchProblem);
            const biait::PlannerConfig cfg = biait::configFor(s, {}, tuningOverrides(benchTuning));
            const auto planners = splitList(benchPlanners);
            if (planners.empty())
                throw biait::UsageError("--planners is empty");
            const auto [lo, hi] = parseSeeds(benchSeeds);
            const auto rows = biait::runBench(s, planners, lo, hi, cfg, benchParallel);
            biait::writeCsv(benchCsv, rows, planners);
            for (const auto &sum : biait::summarize(rows, planners))
                std::cout << biait::summaryLine(sum) << "\n";
            return kExitOk;
        }
        if (*svg)
        {
            std::ifstream in(svgTrace);
            if (!in)
                throw biait::UsageError("cannot open trace " + svgTrace);
            biait::json trace;
            try
            {
                trace = biait::json::parse(in);
            }
            catch (const biait::json::parse_error &e)
            {
                throw biait::UsageError(std::string("parse error in trace: ") + e.what());
            }
            biait::emitSvg(trace, svgOut);
            return kExitOk;
        }
        if (*worlds)
        {
            for (const auto &n : biait::worldNames())
                std::cout << n << "\n";
            if (!writeDir.empty())
            {
                std::filesystem::create_directories(writeDir);
                for (const char *n : {"wallgap2d", "bugtrap2d", "maze2d", "narrow2d", "empty-2"})
                    biait::saveScenario(biait::builtinWorld(n), (std::filesystem::path(writeDir) / (std::string(n) + ".json")).string());
            }
            return kExitOk;
        }
    }
    catch (const biait::UsageError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const biait::json::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
