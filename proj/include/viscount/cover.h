#ifndef VISCOUNT_COVER_H
#define VISCOUNT_COVER_H

#include "viscount/arrangement.h"

#include <cstdint>
#include <vector>

namespace viscount {

/// The colored triangle cover VT_S: per input segment ("color"), a set of
/// interior-disjoint triangles whose union is exactly that segment's
/// visibility region. Triangles come from labeled trapezoids split along the
/// bottom-left to top-right diagonal, so the per-color multiplicity at any
/// generic point is exactly one.
struct Cover {
    struct Tri {
        int v0, v1, v2; // counterclockwise, indices into vertices
        int color;
    };
    struct Edge {
        int va, vb;              // va < vb
        std::vector<int> colors; // colors of every triangle bordering the edge
    };

    std::vector<Point> vertices;
    std::vector<Tri> triangles;
    std::vector<std::vector<int>> by_color; // triangle ids per color
    std::vector<Edge> edges;                // the deduplicated edge set E

    // Uniform grid over the box (exact bucket arithmetic) so membership
    // scans only nearby triangles.
    int grid_n = 0;
    Box grid_box;
    std::vector<std::vector<int>> grid; // row-major triangle buckets

    int grid_coord(const Rat& v, const Rat& lo, const Rat& span) const;
    const std::vector<int>& bucket(const Point& p) const;

    Triangle geom(int tri) const {
        const Tri& t = triangles[static_cast<std::size_t>(tri)];
        return Triangle{vertices[static_cast<std::size_t>(t.v0)],
                        vertices[static_cast<std::size_t>(t.v1)],
                        vertices[static_cast<std::size_t>(t.v2)]};
    }
    Segment edge_geom(int e) const {
        const Edge& ed = edges[static_cast<std::size_t>(e)];
        return Segment(vertices[static_cast<std::size_t>(ed.va)],
                       vertices[static_cast<std::size_t>(ed.vb)]);
    }
};

Cover build_cover(const TrapArrangement& arr, const FaceLabels& labels);

struct Membership {
    std::vector<int> colors;        // distinct colors containing p, sorted
    std::vector<int> multiplicity;  // per entry of colors
    int total = 0;                  // triangles containing p over all colors
    bool on_boundary = false;       // p lies on some triangle edge
};

Membership membership(const Cover& cover, const Point& p);

struct CoverCounterexample {
    Point p;
    std::vector<int> cover_colors;
    std::vector<int> oracle_colors;
};

struct CoverReport {
    int samples_checked = 0;
    std::vector<CoverCounterexample> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

/// Samples general-position points (alternating box-uniform draws and
/// per-triangle interior probes) and checks that cover membership equals the
/// visibility oracle color-for-color.
CoverReport verify_cover(const Cover& cover, const Scene& scene, int sample_count,
                         std::uint64_t seed);

} // namespace viscount

#endif
