// Structured planner event log.
#pragma once

#include <biait/nngraph.hpp>

#include <string>
#include <vector>

namespace biait
{
    enum class EventType
    {
        SampleBatch,
        LazyPop,
        EdgePop,
        CollisionCheck,
        Meet,
        Solution,
        Repair
    };

    inline const char *eventName(EventType t)
    {
        switch (t)
        {
            case EventType::SampleBatch:
                return "sample-batch";
            case EventType::LazyPop:
                return "lazy-pop";
            case EventType::EdgePop:
                return "edge-pop";
            case EventType::CollisionCheck:
                return "collision-check";
            case EventType::Meet:
                return "meet";
            case EventType::Solution:
                return "solution";
            case EventType::Repair:
                return "repair";
        }
        return "unknown";
    }

    /**
     * One log record. Fields are interpreted per type: a/b are vertex ids (or the batch index and
     * size for sample-batch), value carries a cost, key or validity flag.
     */
    struct Event
    {
        EventType type;
        int role;
        Id a;
        Id b;
        double value;
        double tMs;

        /** Equality ignoring the wall-clock stamp. */
        bool sameAs(const Event &o) const
        {
            return type == o.type && role == o.role && a == o.a && b == o.b &&
                   (value == o.value || (value != value && o.value != o.value));
        }
    };

    using EventLog = std::vector<Event>;
}  // namespace biait
