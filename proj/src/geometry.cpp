#include "viscount/geometry.h"

#include "viscount/counters.h"

#include <algorithm>
#include <cassert>
#include <map>

namespace viscount {

bool lex_less(const Point& a, const Point& b) {
    int cx = cmp(a.x, b.x);
    if (cx != 0) return cx < 0;
    return a.y < b.y;
}

int orient_sign(const Point& a, const Point& b, const Point& c) {
    ++counters().orient_calls;
    Rat det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return sign(det);
}

Rat cross2(const Rat& ax, const Rat& ay, const Rat& bx, const Rat& by) {
    return ax * by - ay * bx;
}

Rat dot2(const Rat& ax, const Rat& ay, const Rat& bx, const Rat& by) {
    return ax * bx + ay * by;
}

Rat dist2(const Point& a, const Point& b) {
    Rat dx = b.x - a.x;
    Rat dy = b.y - a.y;
    return dx * dx + dy * dy;
}

Rat dist2_point_segment(const Point& p, const Segment& s) {
    Rat rx = s.b.x - s.a.x;
    Rat ry = s.b.y - s.a.y;
    Rat rr = rx * rx + ry * ry;
    if (sign(rr) == 0) return dist2(p, s.a);
    Rat t = dot2(p.x - s.a.x, p.y - s.a.y, rx, ry) / rr;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    Point q(s.a.x + t * rx, s.a.y + t * ry);
    return dist2(p, q);
}

bool point_on_segment(const Point& p, const Segment& s) {
    if (orient_sign(s.a, s.b, p) != 0) return false;
    Rat rx = s.b.x - s.a.x;
    Rat ry = s.b.y - s.a.y;
    Rat t = dot2(p.x - s.a.x, p.y - s.a.y, rx, ry);
    return sign(t) >= 0 && t <= rx * rx + ry * ry;
}

SegmentIntersection segment_intersection(const Segment& s, const Segment& t) {
    ++counters().segment_intersections;
    SegmentIntersection out;

    Rat rx = s.b.x - s.a.x, ry = s.b.y - s.a.y;
    Rat ux = t.b.x - t.a.x, uy = t.b.y - t.a.y;
    Rat wx = t.a.x - s.a.x, wy = t.a.y - s.a.y;
    Rat denom = cross2(rx, ry, ux, uy);

    if (sign(denom) != 0) {
        Rat tt = cross2(wx, wy, ux, uy) / denom; // along s
        Rat ss = cross2(wx, wy, rx, ry) / denom; // along t
        if (sign(tt) < 0 || tt > 1 || sign(ss) < 0 || ss > 1) return out;
        out.kind = SegmentIntersection::SinglePoint;
        out.point = Point(s.a.x + tt * rx, s.a.y + tt * ry);
        return out;
    }

    // Parallel. Distinct lines -> empty.
    if (sign(cross2(wx, wy, rx, ry)) != 0) return out;

    // Collinear: project t's endpoints on s's parameter.
    Rat rr = rx * rx + ry * ry;
    if (sign(rr) == 0) {
        // s degenerate: treat as the point s.a.
        if (point_on_segment(s.a, t)) {
            out.kind = SegmentIntersection::SinglePoint;
            out.point = s.a;
        }
        return out;
    }
    Rat pc = dot2(wx, wy, rx, ry) / rr;
    Rat pd = dot2(t.b.x - s.a.x, t.b.y - s.a.y, rx, ry) / rr;
    Rat lo = std::min(pc, pd), hi = std::max(pc, pd);
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;
    int c = cmp(lo, hi);
    if (c > 0) return out;
    Point plo(s.a.x + lo * rx, s.a.y + lo * ry);
    if (c == 0) {
        out.kind = SegmentIntersection::SinglePoint;
        out.point = plo;
        return out;
    }
    out.kind = SegmentIntersection::Overlap;
    out.overlap = Segment(plo, Point(s.a.x + hi * rx, s.a.y + hi * ry));
    return out;
}

bool open_segments_cross(const Segment& s, const Segment& t) {
    SegmentIntersection x = segment_intersection(s, t);
    switch (x.kind) {
        case SegmentIntersection::Empty:
            return false;
        case SegmentIntersection::SinglePoint:
            return x.point != s.a && x.point != s.b;
        case SegmentIntersection::Overlap:
            // A positive-length overlap always contains interior points of s.
            return true;
    }
    return false;
}

Containment point_in_triangle(const Point& p, const Triangle& t) {
    int s0 = orient_sign(t.v0, t.v1, p);
    int s1 = orient_sign(t.v1, t.v2, p);
    int s2 = orient_sign(t.v2, t.v0, p);
    if (s0 < 0 || s1 < 0 || s2 < 0) return Containment::Outside;
    if (s0 == 0 || s1 == 0 || s2 == 0) return Containment::Boundary;
    return Containment::Inside;
}

namespace {

// Clip the parameter interval of s(t) = a + t*(b-a), t in [lo, hi], against
// the closed half-plane left of edge (u, v). Returns false if it empties or
// if the segment lies on the edge's line (reported via on_edge).
bool clip_halfplane(const Segment& s, const Point& u, const Point& v,
                    Rat& lo, Rat& hi, bool& on_edge_line) {
    Rat ex = v.x - u.x, ey = v.y - u.y;
    Rat f0 = cross2(ex, ey, s.a.x - u.x, s.a.y - u.y);
    Rat f1 = cross2(ex, ey, s.b.x - u.x, s.b.y - u.y);
    int s0 = sign(f0), s1 = sign(f1);
    if (s0 == 0 && s1 == 0) {
        on_edge_line = true;
        return true;
    }
    if (s0 >= 0 && s1 >= 0) return true;
    if (s0 < 0 && s1 < 0) return false;
    // f is linear in t; root at t* = f0 / (f0 - f1).
    Rat tstar = f0 / (f0 - f1);
    if (s0 < 0) {
        if (tstar > lo) lo = tstar;
    } else {
        if (tstar < hi) hi = tstar;
    }
    return lo <= hi;
}

} // namespace

bool segment_crosses_triangle_interior(const Segment& s, const Triangle& t) {
    Rat lo(0), hi(1);
    bool on_edge = false;
    if (!clip_halfplane(s, t.v0, t.v1, lo, hi, on_edge)) return false;
    if (on_edge) return false;
    if (!clip_halfplane(s, t.v1, t.v2, lo, hi, on_edge)) return false;
    if (on_edge) return false;
    if (!clip_halfplane(s, t.v2, t.v0, lo, hi, on_edge)) return false;
    if (on_edge) return false;
    if (lo > hi) return false;
    if (lo == hi) {
        // Single clipped point: interior iff strictly inside all three edges.
        Point p(s.a.x + lo * (s.b.x - s.a.x), s.a.y + lo * (s.b.y - s.a.y));
        return point_in_triangle(p, t) == Containment::Inside;
    }
    // Positive-length clipped piece not collinear with any edge: its interior
    // is strictly inside the (convex) triangle unless it runs along an edge,
    // which the on_edge checks above already excluded. It could still slide
    // along an edge without being collinear with the *line* only if... it
    // cannot; a chord of a convex region touching the boundary in two points
    // of the same edge is collinear with that edge. Check midpoint to settle
    // boundary-touching chords between two different edges.
    Rat mid = (lo + hi) / 2;
    Point p(s.a.x + mid * (s.b.x - s.a.x), s.a.y + mid * (s.b.y - s.a.y));
    return point_in_triangle(p, t) == Containment::Inside;
}

namespace {

// Half of the circle: 0 for directions with y > 0 or (y == 0 and x > 0),
// 1 otherwise. The sweep starts at +x and turns counterclockwise.
int direction_half(const Rat& dx, const Rat& dy) {
    int sy = sign(dy);
    if (sy > 0) return 0;
    if (sy < 0) return 1;
    return sign(dx) > 0 ? 0 : 1;
}

} // namespace

int angular_compare(const Point& origin, const Point& u, const Point& v) {
    Rat ux = u.x - origin.x, uy = u.y - origin.y;
    Rat vx = v.x - origin.x, vy = v.y - origin.y;
    assert(sign(ux) != 0 || sign(uy) != 0);
    assert(sign(vx) != 0 || sign(vy) != 0);

    int hu = direction_half(ux, uy);
    int hv = direction_half(vx, vy);
    if (hu != hv) return hu < hv ? -1 : 1;
    int c = sign(cross2(ux, uy, vx, vy));
    if (c != 0) return -c; // u before v iff turning u->v is counterclockwise
    // Equal cross within one half means the same ray (opposite directions
    // always land in different halves): nearer first.
    return cmp(ux * ux + uy * uy, vx * vx + vy * vy);
}

std::optional<Rat> ray_segment_hit(const Point& origin, const Point& dir, const Segment& s) {
    Rat wx = s.b.x - s.a.x, wy = s.b.y - s.a.y;
    Rat denom = cross2(dir.x, dir.y, wx, wy);
    Rat qx = s.a.x - origin.x, qy = s.a.y - origin.y;
    if (sign(denom) != 0) {
        Rat lambda = cross2(qx, qy, wx, wy) / denom;
        Rat mu = cross2(qx, qy, dir.x, dir.y) / denom;
        if (sign(lambda) > 0 && sign(mu) >= 0 && mu <= 1) return lambda;
        return std::nullopt;
    }
    // Parallel: hit only if collinear.
    if (sign(cross2(qx, qy, dir.x, dir.y)) != 0) return std::nullopt;
    Rat dd = dot2(dir.x, dir.y, dir.x, dir.y);
    Rat la = dot2(qx, qy, dir.x, dir.y) / dd;
    Rat lb = dot2(s.b.x - origin.x, s.b.y - origin.y, dir.x, dir.y) / dd;
    Rat mn = std::min(la, lb), mx = std::max(la, lb);
    if (sign(mx) <= 0) return std::nullopt;
    if (sign(mn) > 0) return mn;
    // Origin touches the collinear obstacle; callers keep viewpoints off
    // obstacles, so treat it as contact at radius zero.
    return Rat(0);
}

Rat ray_line_param(const Point& origin, const Point& dir, const Segment& s) {
    Rat wx = s.b.x - s.a.x, wy = s.b.y - s.a.y;
    Rat denom = cross2(dir.x, dir.y, wx, wy);
    assert(sign(denom) != 0);
    return cross2(s.a.x - origin.x, s.a.y - origin.y, wx, wy) / denom;
}

Rat triangle_area2(const Triangle& t) {
    return cross2(t.v1.x - t.v0.x, t.v1.y - t.v0.y, t.v2.x - t.v0.x, t.v2.y - t.v0.y);
}

Rat simplest_dyadic_between(const Rat& lo, const Rat& hi, int min_bits) {
    assert(lo < hi);
    mpz_class scale(1);
    scale <<= static_cast<unsigned>(min_bits);
    for (;;) {
        // Largest k with k/scale < hi; accept if it also clears lo.
        Rat shi = hi * Rat(scale);
        Rat slo = lo * Rat(scale);
        mpz_class k;
        mpz_cdiv_q(k.get_mpz_t(), shi.get_num().get_mpz_t(), shi.get_den().get_mpz_t());
        k -= 1; // strictly below hi even when hi*scale is integral
        if (Rat(k) > slo) {
            Rat r{k, scale};
            r.canonicalize();
            return r;
        }
        scale <<= 1;
    }
}

bool LineKey::operator<(const LineKey& o) const {
    int c = cmp(a, o.a);
    if (c != 0) return c < 0;
    c = cmp(b, o.b);
    if (c != 0) return c < 0;
    return cmp(this->c, o.c) < 0;
}

LineKey line_key(const Segment& s) {
    // Line through s: A x + B y + C = 0 with A = dy, B = -dx, C = dx*ay - dy*ax.
    Rat dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    Rat A = dy, B = -dx;
    Rat C = dx * s.a.y - dy * s.a.x;
    // Clear denominators.
    mpz_class den = A.get_den() * B.get_den() * C.get_den();
    mpz_class ia = mpz_class(A.get_num() * (den / A.get_den()));
    mpz_class ib = mpz_class(B.get_num() * (den / B.get_den()));
    mpz_class ic = mpz_class(C.get_num() * (den / C.get_den()));
    mpz_class g = gcd(gcd(abs(ia), abs(ib)), abs(ic));
    if (g != 0) { ia /= g; ib /= g; ic /= g; }
    if (ia < 0 || (ia == 0 && ib < 0)) { ia = -ia; ib = -ib; ic = -ic; }
    return LineKey{ia, ib, ic};
}

std::vector<MergedSegment> merge_collinear(const std::vector<Segment>& segs) {
    std::map<LineKey, std::vector<int>> lines;
    for (std::size_t i = 0; i < segs.size(); ++i)
        lines[line_key(segs[i])].push_back(static_cast<int>(i));

    std::vector<MergedSegment> out;
    for (auto& [key, ids] : lines) {
        // Parametrize along the line by the dominant axis.
        const Segment& s0 = segs[static_cast<std::size_t>(ids[0])];
        bool use_x = sign(s0.b.x - s0.a.x) != 0;
        auto param = [&](const Point& p) { return use_x ? p.x : p.y; };

        struct Piece { Rat lo, hi; Point plo, phi; std::vector<int> ids; };
        std::vector<Piece> pieces;
        for (int id : ids) {
            const Segment& s = segs[static_cast<std::size_t>(id)];
            Rat pa = param(s.a), pb = param(s.b);
            Piece pc;
            if (pa <= pb) { pc.lo = pa; pc.hi = pb; pc.plo = s.a; pc.phi = s.b; }
            else { pc.lo = pb; pc.hi = pa; pc.plo = s.b; pc.phi = s.a; }
            pc.ids.push_back(id);
            pieces.push_back(std::move(pc));
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const Piece& a, const Piece& b) { return a.lo < b.lo; });

        Piece cur = pieces.front();
        for (std::size_t i = 1; i < pieces.size(); ++i) {
            Piece& nx = pieces[i];
            if (nx.lo <= cur.hi) { // touching counts as mergeable
                if (nx.hi > cur.hi) { cur.hi = nx.hi; cur.phi = nx.phi; }
                cur.ids.insert(cur.ids.end(), nx.ids.begin(), nx.ids.end());
            } else {
                out.push_back({Segment(cur.plo, cur.phi), cur.ids});
                cur = std::move(nx);
            }
        }
        out.push_back({Segment(cur.plo, cur.phi), cur.ids});
    }
    return out;
}

} // namespace viscount
