#ifndef VISCOUNT_COUNTERS_H
#define VISCOUNT_COUNTERS_H

#include <cstdint>

namespace viscount {

/// Logical operation counters, the primary scaling evidence in benchmarks
/// (wall clocks are too noisy at desk scale). Thread-local so that the
/// kernels stay safe for concurrent use.
struct Counters {
    std::uint64_t orient_calls = 0;
    std::uint64_t segment_intersections = 0;
    std::uint64_t sees_point_calls = 0;
    std::uint64_t sees_segment_calls = 0;

    void reset() { *this = Counters{}; }

    Counters diff(const Counters& before) const {
        Counters d;
        d.orient_calls = orient_calls - before.orient_calls;
        d.segment_intersections = segment_intersections - before.segment_intersections;
        d.sees_point_calls = sees_point_calls - before.sees_point_calls;
        d.sees_segment_calls = sees_segment_calls - before.sees_segment_calls;
        return d;
    }
};

inline Counters& counters() {
    thread_local Counters c;
    return c;
}

} // namespace viscount

#endif
