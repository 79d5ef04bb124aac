// AIT* baseline: one lazy-reverse search from the goals guiding one forward valid search.
#pragma once

#include <biait/planner_biait.hpp>

namespace biait
{
    /**
     * Shares the graph, sampler, queues and collision checker with BiAIT*. The lazy-reverse tree is
     * rebuilt from the goals every batch; a collision on one of its links invalidates the subtree
     * below that link.
     */
    class AITstar : public LazyPlanner
    {
    public:
        AITstar(ProblemDef problem, PlannerConfig cfg)
          : LazyPlanner(std::move(problem), std::move(cfg), Mode::Unidirectional)
        {
        }
    };
}  // namespace biait
