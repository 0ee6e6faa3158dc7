#ifndef VISCOUNT_SCENE_H
#define VISCOUNT_SCENE_H

#include "viscount/geometry.h"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace viscount {

/// The input set S: pairwise disjoint closed segments strictly inside a
/// bounding box. Segment ids are positions in `segments`. Immutable after
/// validation; the box clips regions but never blocks sight lines.
struct Scene {
    Box bbox;
    std::vector<Segment> segments;

    int size() const { return static_cast<int>(segments.size()); }
    const Segment& seg(int id) const { return segments[static_cast<std::size_t>(id)]; }

    /// All 2n endpoints; endpoint k belongs to segment k/2, end k%2.
    Point endpoint(int k) const {
        const Segment& s = segments[static_cast<std::size_t>(k / 2)];
        return (k % 2 == 0) ? s.a : s.b;
    }
    int endpoint_count() const { return 2 * size(); }

    std::array<Point, 4> corners() const {
        return {bbox.lo, Point(bbox.hi.x, bbox.lo.y), bbox.hi, Point(bbox.lo.x, bbox.hi.y)};
    }
    std::array<Segment, 4> walls() const {
        auto c = corners();
        return {Segment(c[0], c[1]), Segment(c[1], c[2]), Segment(c[2], c[3]), Segment(c[3], c[0])};
    }

    /// Id of a segment whose closed set contains p, or -1.
    int segment_containing(const Point& p) const;
};

/// Degeneracy audit. Flags are advisory for loaded scenes; generated scenes
/// are re-sampled until all flags are empty.
struct GeneralPositionReport {
    std::vector<std::array<int, 3>> collinear_endpoint_triples; // endpoint ids
    std::vector<std::array<int, 2>> shared_x_pairs;             // endpoint ids
    std::vector<std::array<int, 2>> endpoint_on_segment_line;   // endpoint id, segment id

    bool clean() const {
        return collinear_endpoint_triples.empty() && shared_x_pairs.empty() &&
               endpoint_on_segment_line.empty();
    }
};

/// Checks hard invariants (throws DisjointnessViolation / OutOfBounds /
/// DegenerateSegment) and reports soft degeneracies.
GeneralPositionReport validate(const Scene& scene);

struct GenerateOptions {
    Rat min_separation = Rat(1);
    Rat max_len = Rat(0);       // 0 means a quarter of the box diagonal span
    int lattice_bits = 16;      // endpoints on a 2^bits grid scaled to the box
    int attempts_per_segment = 4000;
};

/// Deterministic rejection sampler; the result always passes validate with a
/// clean report. Throws GenerationExhausted when the attempt budget runs out.
Scene generate_random(int n, const Box& bbox, std::uint64_t seed, const GenerateOptions& opt = {});

Scene load_scene(std::istream& in);
Scene load_scene_file(const std::string& path);
void save_scene(const Scene& scene, std::ostream& out);
void save_scene_file(const Scene& scene, const std::string& path);

} // namespace viscount

#endif
