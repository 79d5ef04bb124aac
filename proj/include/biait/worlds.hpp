// Built-in planning worlds.
#pragma once

#include <biait/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace biait
{
    struct WorldParams
    {
        std::size_t dim{2};  // empty-d
        std::uint64_t mazeSeed{1};  // maze2d
    };

    inline const std::vector<std::string> &worldNames()
    {
        static const std::vector<std::string> names{"wallgap2d", "bugtrap2d", "maze2d", "narrow2d", "empty-d", "blocks-r7"};
        return names;
    }

    /** Optimal cost of wallgap2d: around the closed wall's top corners (4.8, 8) and (5.2, 8). */
    inline double wallgapOptimalCost() { return 2.0 * std::hypot(3.8, 3.0) + 0.4; }

    namespace detail
    {
        inline ProblemDef box2d()
        {
            ProblemDef p;
            p.dim = 2;
            p.bounds = {{0.0, 0.0}, {10.0, 10.0}};
            p.resolution = 0.001;
            return p;
        }

        /** 5x5 cells of size 2; walls removed along a randomized depth-first spanning tree. */
        inline std::vector<Obstacle> mazeWalls(std::uint64_t seed)
        {
            constexpr int n = 5;
            constexpr double cell = 2.0;
            constexpr double half = 0.1;
            // open[i][j][0]: wall east of (i,j) removed; open[i][j][1]: wall north of (i,j) removed
            bool open[n][n][2] = {};
            bool seen[n][n] = {};
            std::mt19937_64 rng(seed);
            std::vector<std::pair<int, int>> stack{{0, 0}};
            seen[0][0] = true;
            while (!stack.empty())
            {
                const auto [i, j] = stack.back();
                std::vector<int> dirs;
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d)
                {
                    const int a = i + di[d], b = j + dj[d];
                    if (a >= 0 && a < n && b >= 0 && b < n && !seen[a][b])
                        dirs.push_back(d);
                }
                if (dirs.empty())
                {
                    stack.pop_back();
                    continue;
                }
                const int d = dirs[std::uniform_int_distribution<std::size_t>(0, dirs.size() - 1)(rng)];
                const int a = i + di[d], b = j + dj[d];
                if (d == 0)
                    open[i][j][0] = true;
                else if (d == 1)
                    open[a][b][0] = true;
                else if (d == 2)
                    open[i][j][1] = true;
                else
                    open[a][b][1] = true;
                seen[a][b] = true;
                stack.push_back({a, b});
            }
            std::vector<Obstacle> walls;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                {
                    const double x0 = i * cell, y0 = j * cell;
                    if (i + 1 < n && !open[i][j][0])
                        walls.push_back(Obstacle::aabb({x0 + cell - half, y0}, {x0 + cell + half, y0 + cell}));
                    if (j + 1 < n && !open[i][j][1])
                        walls.push_back(Obstacle::aabb({x0, y0 + cell - half}, {x0 + cell, y0 + cell + half}));
                }
            for (int i = 1; i < n; ++i)
                for (int j = 1; j < n; ++j)
                    walls.push_back(Obstacle::aabb({i * cell - half, j * cell - half}, {i * cell + half, j * cell + half}));
            return walls;
        }
    }  // namespace detail

    /** Deterministic generator; "empty-2", "empty-4" and "empty-7" are accepted as shorthands. */
    inline Scenario builtinWorld(const std::string &name, WorldParams params = {})
    {
        if (name.size() > 6 && name.rfind("empty-", 0) == 0 && name != "empty-d")
        {
            const std::string d = name.substr(6);
            if (d.find_first_not_of("0123456789") != std::string::npos)
                throw UsageError("unknown world \"" + name + "\"");
            params.dim = static_cast<std::size_t>(std::stoul(d));
            return builtinWorld("empty-d", params);
        }
        Scenario s;
        s.name = name;
        ProblemDef &p = s.problem;
        if (name == "wallgap2d")
        {
            p = detail::box2d();
            p.start = {1.0, 5.0};
            p.goals = {{9.0, 5.0}};
            p.obstacles = {Obstacle::aabb({4.8, 0.0}, {5.2, 8.0})};
        }
        else if (name == "bugtrap2d")
        {
            // C-shaped trap around the start, open on the side facing away from the goal
            p = detail::box2d();
            p.start = {3.5, 5.0};
            p.goals = {{9.0, 5.0}};
            p.obstacles = {Obstacle::aabb({2.0, 6.5}, {5.0, 7.0}), Obstacle::aabb({2.0, 3.0}, {5.0, 3.5}),
                           Obstacle::aabb({4.5, 3.5}, {5.0, 6.5})};
        }
        else if (name == "maze2d")
        {
            p = detail::box2d();
            p.start = {1.0, 1.0};
            p.goals = {{9.0, 9.0}};
            p.obstacles = detail::mazeWalls(params.mazeSeed);
            s.name = "maze2d";
        }
        else if (name == "narrow2d")
        {
            p = detail::box2d();
            p.start = {1.0, 2.0};
            p.goals = {{9.0, 2.0}};
            p.obstacles = {Obstacle::aabb({4.9, 0.0}, {5.1, 8.0}), Obstacle::aabb({4.9, 8.3}, {5.1, 10.0})};
        }
        else if (name == "empty-d")
        {
            const std::size_t d = params.dim;
            if (d != 2 && d != 4 && d != 7)
                throw UsageError("empty-d supports d in {2, 4, 7}");
            p.dim = d;
            p.bounds = {StateVec(d, 0.0), StateVec(d, 10.0)};
            p.start = StateVec(d, 5.0);
            p.start[0] = 1.0;
            StateVec g(d, 5.0);
            g[0] = 9.0;
            p.goals = {g};
            s.name = "empty-" + std::to_string(d);
        }
        else if (name == "blocks-r7")
        {
            const double pi = std::acos(-1.0);
            p.dim = 7;
            p.bounds = {StateVec(7, -pi), StateVec(7, pi)};
            p.start = StateVec(7, 0.0);
            p.start[0] = -2.5;
            StateVec g(7, 0.0);
            g[0] = 2.5;
            p.goals = {g};
            p.obstacles = {Obstacle::aabb(StateVec(7, -1.0), StateVec(7, 1.0))};
        }
        else
            throw UsageError("unknown world \"" + name + "\"");
        validateProblem(p);
        return s;
    }
}  // namespace biait
