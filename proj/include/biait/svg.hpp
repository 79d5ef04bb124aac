// SVG rendering of a 2D trial trace.
#pragma once

#include <biait/scenario.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

namespace biait
{
    namespace detail
    {
        /** Maps world coordinates to a 600 px canvas with y pointing up. */
        struct Canvas
        {
            double lo[2];
            double hi[2];
            double scale;

            explicit Canvas(const Bounds &b)
            {
                for (int i = 0; i < 2; ++i)
                {
                    lo[i] = b.lo[i];
                    hi[i] = b.hi[i];
                }
                scale = 600.0 / std::max(hi[0] - lo[0], hi[1] - lo[1]);
            }

            double x(double v) const { return (v - lo[0]) * scale; }
            double y(double v) const { return (hi[1] - v) * scale; }
            double width() const { return (hi[0] - lo[0]) * scale; }
            double height() const { return (hi[1] - lo[1]) * scale; }
        };

        inline std::string fmt(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", v);
            return buf;
        }

        inline std::string point(const Canvas &c, const json &s)
        {
            return fmt(c.x(s.at(0).get<double>())) + "," + fmt(c.y(s.at(1).get<double>()));
        }
    }  // namespace detail

    /**
     * Obstacles black, lazy trees red (A) and blue (B), valid trees green, best solution violet,
     * samples grey. Output bytes depend only on the trace.
     */
    inline std::string renderSvg(const json &trace)
    {
        using detail::fmt;
        const Scenario s = scenarioFromJson(trace.at("scenario"));
        if (s.problem.dim != 2)
            throw UsageError("emit-svg: unsupported dimension " + std::to_string(s.problem.dim) + " (only 2D)");
        const detail::Canvas c(s.problem.bounds);
        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(c.width()) + "\" height=\"" +
               fmt(c.height()) + "\" viewBox=\"0 0 " + fmt(c.width()) + " " + fmt(c.height()) + "\">\n";
        out += "<path d=\"M0,0 H" + fmt(c.width()) + " V" + fmt(c.height()) +
               " H0 Z\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

        for (const auto &o : s.problem.obstacles)
        {
            if (o.kind == Obstacle::Kind::Aabb)
                out += "<rect x=\"" + fmt(c.x(o.min[0])) + "\" y=\"" + fmt(c.y(o.max[1])) + "\" width=\"" +
                       fmt((o.max[0] - o.min[0]) * c.scale) + "\" height=\"" + fmt((o.max[1] - o.min[1]) * c.scale) +
                       "\" fill=\"black\"/>\n";
            else
                out += "<circle cx=\"" + fmt(c.x(o.center[0])) + "\" cy=\"" + fmt(c.y(o.center[1])) + "\" r=\"" +
                       fmt(o.radius * c.scale) + "\" fill=\"black\"/>\n";
        }

        const json empty = json::object();
        const json &snap = trace.contains("snapshot") ? trace.at("snapshot") : empty;
        json states = json::object();
        if (snap.contains("samples"))
        {
            for (const auto &v : snap.at("samples"))
            {
                states[std::to_string(v.at("id").get<Id>())] = v.at("x");
                out += "<circle cx=\"" + fmt(c.x(v.at("x").at(0).get<double>())) + "\" cy=\"" +
                       fmt(c.y(v.at("x").at(1).get<double>())) + "\" r=\"1.5\" fill=\"grey\"/>\n";
            }
        }
        auto edges = [&](const char *field, int role, const char *colour) {
            if (!snap.contains(field))
                return;
            for (const auto &e : snap.at(field).at(role))
            {
                const json &a = states.at(std::to_string(e.at(0).get<Id>()));
                const json &b = states.at(std::to_string(e.at(1).get<Id>()));
                out += "<line x1=\"" + fmt(c.x(a.at(0).get<double>())) + "\" y1=\"" + fmt(c.y(a.at(1).get<double>())) +
                       "\" x2=\"" + fmt(c.x(b.at(0).get<double>())) + "\" y2=\"" + fmt(c.y(b.at(1).get<double>())) +
                       "\" stroke=\"" + colour + "\" stroke-width=\"1\"/>\n";
            }
        };
        edges("lazy", kA, "red");
        edges("lazy", kB, "blue");
        edges("valid", kA, "green");
        edges("valid", kB, "green");

        if (trace.contains("solutions") && !trace.at("solutions").empty())
        {
            std::string pts;
            for (const auto &x : trace.at("solutions").back().at("path"))
                pts += (pts.empty() ? "" : " ") + detail::point(c, x);
            out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"violet\" stroke-width=\"3\"/>\n";
        }

        out += "<circle cx=\"" + fmt(c.x(s.problem.start[0])) + "\" cy=\"" + fmt(c.y(s.problem.start[1])) +
               "\" r=\"6\" fill=\"orange\" stroke=\"black\"/>\n";
        for (const auto &g : s.problem.goals)
            out += "<circle cx=\"" + fmt(c.x(g[0])) + "\" cy=\"" + fmt(c.y(g[1])) +
                   "\" r=\"6\" fill=\"cyan\" stroke=\"black\"/>\n";
        out += "</svg>\n";
        return out;
    }

    inline void emitSvg(const json &trace, const std::string &path)
    {
        const std::string svg = renderSvg(trace);
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw UsageError("cannot write " + path);
        out << svg;
    }
}  // namespace biait
