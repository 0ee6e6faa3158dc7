#ifndef VISCOUNT_TRAPMAP_H
#define VISCOUNT_TRAPMAP_H

#include "viscount/geometry.h"

#include <cstdint>
#include <vector>

namespace viscount {

/// Randomized-incremental trapezoidal decomposition over exact coordinates.
///
/// Input subsegments must be interior-disjoint: they may share endpoints but
/// may not cross, overlap, or contain another subsegment's endpoint in their
/// relative interior (the caller pre-splits all contacts). Vertical
/// subsegments and shared x-coordinates are handled by a symbolic shear: all
/// x-comparisons are lexicographic (x, then y), which is exactly the limit
/// geometry of x' = x + eps*y. Degenerate zero-real-width trapezoids
/// ("slivers") then stand in for vertical walls; they carry no area and no
/// representative points but participate in adjacency.
class TrapMap {
public:
    static constexpr int kTopSentinel = -1;
    static constexpr int kBottomSentinel = -2;

    struct Input {
        Segment seg;
        int parent = -1; // caller's edge id this subsegment came from
    };

    struct Trap {
        int top = kTopSentinel;    // subsegment id bounding from above
        int bottom = kBottomSentinel;
        Point leftp, rightp;       // generating vertices of the side walls
        int ul = -1, ll = -1, ur = -1, lr = -1; // wall neighbors
        int node = -1;             // leaf node in the search DAG
        bool removed = false;
    };

    /// Adjacency between live trapezoids sharing a positive-length boundary.
    struct Adjacency {
        enum Kind { Wall, AcrossSegment } kind = Wall;
        int a = -1, b = -1;   // for AcrossSegment: a above the segment, b below
        int subsegment = -1;  // valid for AcrossSegment
        Point shared_midpoint; // a point in the relative interior of the share
    };

    TrapMap(std::vector<Input> subsegments, Box box, std::uint64_t seed);

    const Box& box() const { return box_; }
    const std::vector<Input>& subsegments() const { return subs_; }
    const std::vector<Trap>& traps() const { return traps_; }

    /// Live trapezoid ids (construction leaves removed slots behind).
    const std::vector<int>& live() const { return live_; }

    bool is_sliver(int trap) const {
        const Trap& t = traps_[static_cast<std::size_t>(trap)];
        return t.leftp.x == t.rightp.x;
    }

    /// Exact corner of a trapezoid. Slivers degenerate as expected.
    Point corner(int trap, bool right_side, bool top_side) const;

    /// Strictly interior representative point; only for non-sliver traps.
    Point representative(int trap) const;

    Rat area(int trap) const;

    /// Point location. Throws OnBoundary when p lies on a decomposition
    /// edge, a wall, or a vertex (any exact tie on the way down).
    int locate(const Point& p) const;

    /// Superset of trapezoids whose closure meets s, found by descending both
    /// branches wherever s may straddle a node. Callers filter exactly.
    std::vector<int> locate_segment(const Segment& s) const;

    /// All positive-length boundary adjacencies between live trapezoids.
    std::vector<Adjacency> adjacencies() const;

    /// O(traps) reference location for tests: the unique live trapezoid
    /// strictly containing p, or -1 when p lies on structure.
    int locate_by_scan(const Point& p) const;

    /// Structural self-checks (exact area partition, neighbor symmetry);
    /// throws Error on failure. Used by tests.
    void validate_structure() const;

private:
    struct Node {
        enum Kind { X, Y, Leaf } kind = Leaf;
        Point pt;          // X
        int seg = -1;      // Y
        int left = -1, right = -1;
        int trap = -1;     // Leaf
    };

    Box box_;
    std::vector<Input> subs_;
    std::vector<Point> lefts_, rights_; // lex-sorted endpoints per subsegment
    std::vector<Trap> traps_;
    std::vector<Node> nodes_;
    std::vector<int> live_;
    int root_ = -1;
    mutable std::vector<std::uint32_t> visit_stamp_;
    mutable std::uint32_t stamp_ = 0;

    bool above(int seg, const Point& p) const; // p strictly above subsegment's line
    int orient_vs(int seg, const Point& p) const;
    Rat y_at(int seg, const Rat& x) const;

    int locate_for_insert(const Point& p, const Point& dir) const;
    void insert(int seg_id);

    int new_trap(int top, int bottom, Point leftp, Point rightp);
    int new_leaf(int trap);
    void finalize_live();
};

} // namespace viscount

#endif
