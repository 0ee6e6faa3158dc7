#ifndef VISCOUNT_VISIBILITY_H
#define VISCOUNT_VISIBILITY_H

#include "viscount/scene.h"

#include <vector>

namespace viscount {

/// Source of a visibility-polygon boundary edge.
struct BoundarySource {
    enum Kind { SegmentPortion, BboxPortion, Window } kind = Window;
    int id = -1; // segment id or wall index (0 bottom, 1 right, 2 top, 3 left)
};

/// Star-shaped (w.r.t. the viewpoint) region boundary, counterclockwise.
/// Each vertex is tagged with the source of the edge leaving it.
struct VisibilityPolygon {
    Point viewpoint;
    std::vector<Point> boundary;
    std::vector<BoundarySource> boundary_sources; // parallel to boundary
    std::vector<int> visible_segment_ids;         // sorted
    int visible_endpoint_count = 0;
};

struct CountResult {
    int m_p = 0;
    std::vector<int> visible_set; // sorted segment ids
};

/// True iff the open segment (p,q) misses every closed obstacle except
/// `ignore`. Closed obstacles: grazing an obstacle endpoint blocks.
bool sees_point(const Point& p, const Point& q, const Scene& scene, int ignore = -1);

/// Weak visibility of segment i from p: some point of the segment is visible.
/// The target is never its own blocker; p on the segment sees it trivially.
/// Cone-restricted: only obstacles meeting conv(p, s_i) are consulted.
bool sees_segment(const Point& p, int i, const Scene& scene);

/// Exact rotational sweep around p over obstacle endpoints and box corners.
/// Requires p strictly inside the box and off all obstacles.
VisibilityPolygon visibility_polygon(const Point& p, const Scene& scene);

/// Exact m_p with the visible id set; uses the sweep when p is in general
/// position and falls back to per-segment tests otherwise.
CountResult visible_count_oracle(const Point& p, const Scene& scene);

/// Number of obstacle endpoints visible from p (the 2-approximation
/// certificate). Requires p off all obstacles.
int visible_endpoint_count(const Point& p, const Scene& scene);

} // namespace viscount

#endif
