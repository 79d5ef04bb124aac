// Scenario files: a ProblemDef plus per-planner overrides, stored as one JSON document.
#pragma once

#include <biait/planner_biait.hpp>
#include <biait/space.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace biait
{
    using nlohmann::json;

    struct Scenario
    {
        std::string name;
        ProblemDef problem;
        json planner = json::object();  // optional overrides
    };

    namespace detail
    {
        inline const json &field(const json &j, const char *key, const std::string &where)
        {
            if (!j.is_object() || !j.contains(key))
                throw UsageError("missing field \"" + std::string(key) + "\"" + (where.empty() ? "" : " in " + where));
            return j.at(key);
        }

        inline StateVec vec(const json &j, const std::string &name)
        {
            if (!j.is_array())
                throw UsageError("field \"" + name + "\" must be an array of numbers");
            StateVec v;
            for (const auto &e : j)
            {
                if (!e.is_number())
                    throw UsageError("field \"" + name + "\" must be an array of numbers");
                v.push_back(e.get<double>());
            }
            return v;
        }
    }  // namespace detail

    inline json toJson(const ProblemDef &p)
    {
        json obs = json::array();
        for (const auto &o : p.obstacles)
        {
            if (o.kind == Obstacle::Kind::Aabb)
                obs.push_back({{"type", "aabb"}, {"min", o.min}, {"max", o.max}});
            else
                obs.push_back({{"type", "sphere"}, {"center", o.center}, {"radius", o.radius}});
        }
        return {{"dim", p.dim},
                {"bounds", {{"lo", p.bounds.lo}, {"hi", p.bounds.hi}}},
                {"start", p.start},
                {"goals", p.goals},
                {"obstacles", obs},
                {"resolution", p.resolution}};
    }

    inline json toJson(const Scenario &s)
    {
        json j = toJson(s.problem);
        j["name"] = s.name;
        j["planner"] = s.planner;
        return j;
    }

    /** Parses and validates; errors name the offending field. */
    inline Scenario scenarioFromJson(const json &j)
    {
        using detail::field;
        using detail::vec;
        Scenario s;
        s.name = field(j, "name", "").get<std::string>();
        ProblemDef &p = s.problem;
        const json &dim = field(j, "dim", "");
        if (!dim.is_number_integer() || dim.get<long long>() <= 0)
            throw UsageError("field \"dim\" must be a positive integer");
        p.dim = dim.get<std::size_t>();
        const json &b = field(j, "bounds", "");
        p.bounds.lo = vec(field(b, "lo", "bounds"), "bounds.lo");
        p.bounds.hi = vec(field(b, "hi", "bounds"), "bounds.hi");
        p.start = vec(field(j, "start", ""), "start");
        const json &goals = field(j, "goals", "");
        if (!goals.is_array())
            throw UsageError("field \"goals\" must be an array of states");
        for (const auto &g : goals)
            p.goals.push_back(vec(g, "goals"));
        if (j.contains("obstacles"))
        {
            for (const auto &o : j.at("obstacles"))
            {
                const std::string type = field(o, "type", "obstacles").get<std::string>();
                if (type == "aabb")
                    p.obstacles.push_back(Obstacle::aabb(vec(field(o, "min", "obstacles"), "obstacles.min"),
                                                         vec(field(o, "max", "obstacles"), "obstacles.max")));
                else if (type == "sphere")
                    p.obstacles.push_back(Obstacle::sphere(vec(field(o, "center", "obstacles"), "obstacles.center"),
                                                           field(o, "radius", "obstacles").get<double>()));
                else
                    throw UsageError("field \"obstacles.type\" must be \"aabb\" or \"sphere\"");
            }
        }
        if (j.contains("resolution"))
            p.resolution = j.at("resolution").get<double>();
        if (j.contains("planner"))
        {
            if (!j.at("planner").is_object())
                throw UsageError("field \"planner\" must be an object");
            s.planner = j.at("planner");
        }
        validateProblem(p);
        return s;
    }

    inline Scenario loadScenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw UsageError("cannot open scenario file " + path);
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw UsageError("parse error in " + path + ": " + e.what());
        }
        try
        {
            return scenarioFromJson(j);
        }
        catch (const json::exception &e)
        {
            throw UsageError(std::string("malformed field in ") + path + ": " + e.what());
        }
    }

    inline void saveScenario(const Scenario &s, const std::string &path)
    {
        std::ofstream out(path);
        out << toJson(s).dump(2) << "\n";
    }

    /**
     * Applies overrides: batch_size, eta, p_near, near_sigma_frac, variational {init, alpha, cap},
     * time_budget_ms, target_cost, max_batches, resolution.
     */
    inline void applyOverrides(PlannerConfig &cfg, const json &o)
    {
        if (o.contains("batch_size"))
            cfg.sampler.batchSize = o.at("batch_size").get<std::size_t>();
        if (o.contains("eta"))
            cfg.eta = o.at("eta").get<double>();
        if (o.contains("p_near"))
            cfg.sampler.pNear = o.at("p_near").get<double>();
        if (o.contains("near_sigma_frac"))
            cfg.sampler.nearSigmaFrac = o.at("near_sigma_frac").get<double>();
        if (o.contains("variational"))
        {
            const json &v = o.at("variational");
            VariationalSchedule vs;
            vs.init = v.value("init", vs.init);
            vs.alpha = v.value("alpha", vs.alpha);
            vs.cap = v.value("cap", vs.cap);
            cfg.sampler.variational = vs;
        }
        if (o.contains("time_budget_ms"))
            cfg.termination.timeBudgetMs = o.at("time_budget_ms").get<double>();
        if (o.contains("target_cost"))
            cfg.termination.targetCost = o.at("target_cost").get<double>();
        if (o.contains("max_batches"))
            cfg.termination.maxBatches = o.at("max_batches").get<std::size_t>();
        if (o.contains("resolution"))
            cfg.resolution = o.at("resolution").get<double>();
        if (!(cfg.sampler.pNear >= 0.0 && cfg.sampler.pNear < 1.0))
            throw UsageError("p_near must lie in [0, 1)");
        if (cfg.sampler.batchSize == 0)
            throw UsageError("batch_size must be positive");
    }
}  // namespace biait
