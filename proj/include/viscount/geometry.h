#ifndef VISCOUNT_GEOMETRY_H
#define VISCOUNT_GEOMETRY_H

#include "viscount/scalar.h"

#include <optional>
#include <vector>

namespace viscount {

struct Point {
    Rat x;
    Rat y;

    Point() = default;
    Point(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}
    Point(long x_, long y_) : x(x_), y(y_) {}

    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point& o) const { return !(*this == o); }
};

/// Lexicographic (x, then y) order. This doubles as the symbolic shear used
/// by the trapezoidal decomposition to break shared x-coordinates.
bool lex_less(const Point& a, const Point& b);

struct PointLexLess {
    bool operator()(const Point& a, const Point& b) const { return lex_less(a, b); }
};

struct Segment {
    Point a;
    Point b;

    Segment() = default;
    Segment(Point a_, Point b_) : a(std::move(a_)), b(std::move(b_)) {}

    bool operator==(const Segment& o) const { return a == o.a && b == o.b; }
};

/// Counterclockwise, non-degenerate triangle.
struct Triangle {
    Point v0, v1, v2;
};

/// Axis-aligned box given by its min and max corners.
struct Box {
    Point lo;
    Point hi;

    bool contains_closed(const Point& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    bool contains_open(const Point& p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
    }
    Rat width() const { return hi.x - lo.x; }
    Rat height() const { return hi.y - lo.y; }
    Rat area() const { return width() * height(); }
};

enum class Orientation { Clockwise = -1, Collinear = 0, CounterClockwise = 1 };

/// Sign of the exact determinant of (b-a, c-a): +1 for a left turn.
int orient_sign(const Point& a, const Point& b, const Point& c);

inline Orientation orient(const Point& a, const Point& b, const Point& c) {
    return static_cast<Orientation>(orient_sign(a, b, c));
}

Rat cross2(const Rat& ax, const Rat& ay, const Rat& bx, const Rat& by);
Rat dot2(const Rat& ax, const Rat& ay, const Rat& bx, const Rat& by);

/// Squared Euclidean distance (exact).
Rat dist2(const Point& a, const Point& b);
Rat dist2_point_segment(const Point& p, const Segment& s);

/// Closed-point-on-closed-segment test.
bool point_on_segment(const Point& p, const Segment& s);

struct SegmentIntersection {
    enum Kind { Empty, SinglePoint, Overlap } kind = Empty;
    Point point;       // valid for SinglePoint
    Segment overlap;   // valid for Overlap (positive length)
};

/// Exact classification of s ∩ t as closed sets.
SegmentIntersection segment_intersection(const Segment& s, const Segment& t);

/// True iff the relative interior of s meets the closed segment t.
bool open_segments_cross(const Segment& s, const Segment& t);

enum class Containment { Outside = -1, Boundary = 0, Inside = 1 };

Containment point_in_triangle(const Point& p, const Triangle& t);

/// True iff s meets the open interior of t.
bool segment_crosses_triangle_interior(const Segment& s, const Triangle& t);

/// Total order on directions around `origin`, starting at +x and sweeping
/// counterclockwise; equal directions are broken by distance from origin.
/// Returns <0, 0, >0 like a comparator (0 only for identical points).
int angular_compare(const Point& origin, const Point& u, const Point& v);

/// First intersection of the open ray origin + t*dir (t > 0) with a closed
/// segment; returns the smallest such t, or nothing.
std::optional<Rat> ray_segment_hit(const Point& origin, const Point& dir, const Segment& s);

/// Intersection parameter of the (infinite) line origin + t*dir with the
/// line through s; requires the lines not parallel.
Rat ray_line_param(const Point& origin, const Point& dir, const Segment& s);

Rat triangle_area2(const Triangle& t); // twice the signed area (positive, CCW)

/// A dyadic rational strictly inside (lo, hi) with the smallest power-of-two
/// denominator of at least `min_bits` bits. Keeping derived points on coarse
/// dyadics keeps every downstream exact predicate cheap.
Rat simplest_dyadic_between(const Rat& lo, const Rat& hi, int min_bits = 0);

/// Canonical key of the supporting line of a segment: primitive integer
/// (A, B, C) with Ax + By + C = 0, A > 0 or (A == 0 and B > 0).
struct LineKey {
    mpz_class a, b, c;
    bool operator<(const LineKey& o) const;
    bool operator==(const LineKey& o) const { return a == o.a && b == o.b && c == o.c; }
};

LineKey line_key(const Segment& s);

/// Merge collinear, overlapping or touching segments into maximal pieces.
/// `tags[i]` travels with segment i; the merged result unions tags.
struct MergedSegment {
    Segment seg;
    std::vector<int> source_ids; // indices into the input list
};

std::vector<MergedSegment> merge_collinear(const std::vector<Segment>& segs);

} // namespace viscount

#endif
