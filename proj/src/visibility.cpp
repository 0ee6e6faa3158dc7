#include "viscount/visibility.h"

#include "viscount/counters.h"
#include "viscount/errors.h"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>

namespace viscount {

namespace {

void require_in_box(const Point& p, const Scene& scene, const char* who) {
    if (!scene.bbox.contains_closed(p))
        throw OutOfBounds(std::string(who) + ": point outside the bounding box");
}

} // namespace

bool sees_point(const Point& p, const Point& q, const Scene& scene, int ignore) {
    ++counters().sees_point_calls;
    require_in_box(p, scene, "sees_point");
    require_in_box(q, scene, "sees_point");
    if (p == q) return true;
    Segment sight(p, q);
    for (int j = 0; j < scene.size(); ++j) {
        if (j == ignore) continue;
        if (open_segments_cross(sight, scene.seg(j))) return false;
    }
    return true;
}

namespace {

// Clip segment w (parametrized on [lo, hi]) against the closed half-plane on
// the left of (u, v); a segment collinear with the edge is left untouched.
bool clip_closed_halfplane(const Segment& w, const Point& u, const Point& v, Rat& lo, Rat& hi) {
    Rat ex = v.x - u.x, ey = v.y - u.y;
    Rat f0 = cross2(ex, ey, w.a.x - u.x, w.a.y - u.y);
    Rat f1 = cross2(ex, ey, w.b.x - u.x, w.b.y - u.y);
    int s0 = sign(f0), s1 = sign(f1);
    if (s0 >= 0 && s1 >= 0) return true;
    if (s0 < 0 && s1 < 0) return false;
    Rat tstar = f0 / (f0 - f1);
    if (s0 < 0) { if (tstar > lo) lo = tstar; }
    else { if (tstar < hi) hi = tstar; }
    return lo <= hi;
}

Point param_point(const Segment& s, const Rat& t) {
    return Point(s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y));
}

// Parameter along (a, b) of the point where ray p->w meets line(a, b).
Rat shadow_param(const Point& p, const Point& w, const Point& a, const Point& b) {
    Point dir(w.x - p.x, w.y - p.y);
    Rat lambda = ray_line_param(p, dir, Segment(a, b));
    Point x(p.x + lambda * dir.x, p.y + lambda * dir.y);
    Rat bx = b.x - a.x, by = b.y - a.y;
    return dot2(x.x - a.x, x.y - a.y, bx, by) / (bx * bx + by * by);
}

} // namespace

bool sees_segment(const Point& p, int i, const Scene& scene) {
    ++counters().sees_segment_calls;
    require_in_box(p, scene, "sees_segment");
    const Segment& target = scene.seg(i);
    if (point_on_segment(p, target)) return true;

    const Point& a = target.a;
    const Point& b = target.b;

    if (orient_sign(p, a, b) == 0) {
        // p on the target's supporting line: all sight lines to the target
        // share one ray, so only the near endpoint matters.
        const Point& near = dist2(p, a) <= dist2(p, b) ? a : b;
        return sees_point(p, near, scene, i);
    }

    // Counterclockwise cone triangle (p, c0, c1).
    Point c0 = a, c1 = b;
    if (orient_sign(p, c0, c1) < 0) std::swap(c0, c1);

    const Rat cone_lox = std::min(std::min(p.x, a.x), b.x);
    const Rat cone_hix = std::max(std::max(p.x, a.x), b.x);
    const Rat cone_loy = std::min(std::min(p.y, a.y), b.y);
    const Rat cone_hiy = std::max(std::max(p.y, a.y), b.y);

    struct Interval { Rat lo, hi; };
    std::vector<Interval> shadows;

    for (int j = 0; j < scene.size(); ++j) {
        if (j == i) continue;
        const Segment& s = scene.seg(j);
        // Obstacles whose box misses the cone's box cannot shadow anything.
        if ((s.a.x < cone_lox && s.b.x < cone_lox) || (s.a.x > cone_hix && s.b.x > cone_hix) ||
            (s.a.y < cone_loy && s.b.y < cone_loy) || (s.a.y > cone_hiy && s.b.y > cone_hiy))
            continue;
        Rat lo(0), hi(1);
        if (!clip_closed_halfplane(s, p, c0, lo, hi)) continue;
        if (!clip_closed_halfplane(s, c0, c1, lo, hi)) continue;
        if (!clip_closed_halfplane(s, c1, p, lo, hi)) continue;
        if (lo > hi) continue;
        Point w1 = param_point(s, lo);
        Point w2 = param_point(s, hi);

        if (point_on_segment(p, s)) {
            // The obstacle passes through the viewpoint; each side of it is
            // radial and shadows a single parameter on the target.
            for (const Point* w : {&w1, &w2}) {
                if (*w == p) continue;
                Rat t = shadow_param(p, *w, a, b);
                shadows.push_back({t, t});
            }
            continue;
        }
        if (w1 == w2) {
            if (w1 == p) continue;
            Rat t = shadow_param(p, w1, a, b);
            shadows.push_back({t, t});
            continue;
        }
        Rat t1 = shadow_param(p, w1, a, b);
        Rat t2 = shadow_param(p, w2, a, b);
        if (t1 > t2) std::swap(t1, t2);
        shadows.push_back({std::move(t1), std::move(t2)});
    }

    // The target is visible iff the closed shadow intervals fail to cover
    // [0, 1]. Shadows are genuinely closed sets, so no isolated-point gaps
    // can be missed.
    for (auto& iv : shadows) {
        if (iv.lo < 0) iv.lo = 0;
        if (iv.hi > 1) iv.hi = 1;
    }
    std::sort(shadows.begin(), shadows.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    Rat covered(0);
    bool zero_covered = false;
    for (const Interval& iv : shadows) {
        if (iv.lo > iv.hi) continue;
        if (!zero_covered) {
            if (sign(iv.lo) > 0) return true; // gap at the start
            zero_covered = true;
            covered = iv.hi;
        } else {
            if (iv.lo > covered) return true;
            if (iv.hi > covered) covered = iv.hi;
        }
        if (covered >= 1) return false;
    }
    return true;
}

namespace {

struct RayTarget {
    Point pt;
    int endpoint_id; // -1 for box corners
};

} // namespace

VisibilityPolygon visibility_polygon(const Point& p, const Scene& scene) {
    require_in_box(p, scene, "visibility_polygon");
    if (!scene.bbox.contains_open(p))
        throw PointOnObstacle("visibility_polygon: viewpoint on the box boundary");
    if (scene.segment_containing(p) >= 0)
        throw PointOnObstacle("visibility_polygon: viewpoint lies on an obstacle");

    VisibilityPolygon out;
    out.viewpoint = p;

    // Critical directions: obstacle endpoints and box corners.
    std::vector<RayTarget> targets;
    for (int k = 0; k < scene.endpoint_count(); ++k)
        targets.push_back({scene.endpoint(k), k});
    for (const Point& c : scene.corners()) targets.push_back({c, -1});

    std::sort(targets.begin(), targets.end(), [&](const RayTarget& u, const RayTarget& v) {
        return angular_compare(p, u.pt, v.pt) < 0;
    });

    // Group targets into rays of equal direction.
    struct Ray {
        Point dir;
        std::vector<RayTarget> targets; // sorted near to far
    };
    std::vector<Ray> rays;
    for (const RayTarget& t : targets) {
        if (!rays.empty() &&
            sign(cross2(rays.back().dir.x, rays.back().dir.y, t.pt.x - p.x, t.pt.y - p.y)) == 0 &&
            sign(dot2(rays.back().dir.x, rays.back().dir.y, t.pt.x - p.x, t.pt.y - p.y)) > 0) {
            rays.back().targets.push_back(t);
        } else {
            rays.push_back({Point(t.pt.x - p.x, t.pt.y - p.y), {t}});
        }
    }
    const std::size_t nrays = rays.size();
    assert(nrays >= 3);

    std::set<int> ids;
    const auto walls = scene.walls();

    // Per-ray analysis: first obstacle hit and endpoint visibility. Endpoint
    // v is visible iff nothing meets the open sight line earlier, i.e. its
    // radius equals the first-hit radius along the ray.
    for (const Ray& ray : rays) {
        std::optional<Rat> first;
        int first_seg = -1;
        for (int j = 0; j < scene.size(); ++j) {
            std::optional<Rat> hit = ray_segment_hit(p, ray.dir, scene.seg(j));
            if (hit && (!first || *hit < *first)) {
                first = *hit;
                first_seg = j;
            }
        }
        if (first_seg >= 0) ids.insert(first_seg);
        if (!first) continue;
        for (const RayTarget& t : ray.targets) {
            if (t.endpoint_id < 0) continue;
            // Radius of the endpoint along dir (dir is not normalized; use
            // the same parametrization as ray_segment_hit).
            Rat dd = dot2(ray.dir.x, ray.dir.y, ray.dir.x, ray.dir.y);
            Rat lam = dot2(t.pt.x - p.x, t.pt.y - p.y, ray.dir.x, ray.dir.y) / dd;
            if (lam == *first) ++out.visible_endpoint_count;
        }
    }

    // Wedge analysis: between consecutive critical rays the first-hit object
    // is constant; probe it at an interior direction.
    struct Piece {
        Point a, b;
        BoundarySource src;
    };
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k < nrays; ++k) {
        const Point& d0 = rays[k].dir;
        const Point& d1 = rays[(k + 1) % nrays].dir;
        Point mid(d0.x + d1.x, d0.y + d1.y);
        // Consecutive critical rays are separated by less than pi (the four
        // corner rays already are), so mid is strictly inside the wedge.
        assert(sign(cross2(d0.x, d0.y, mid.x, mid.y)) > 0);

        std::optional<Rat> best;
        int best_seg = -1;
        for (int j = 0; j < scene.size(); ++j) {
            std::optional<Rat> hit = ray_segment_hit(p, mid, scene.seg(j));
            if (hit && (!best || *hit < *best)) {
                best = *hit;
                best_seg = j;
            }
        }
        Segment support;
        BoundarySource src;
        if (best_seg >= 0) {
            support = scene.seg(best_seg);
            src = {BoundarySource::SegmentPortion, best_seg};
            ids.insert(best_seg);
        } else {
            int wall = -1;
            for (int w = 0; w < 4; ++w)
                if (ray_segment_hit(p, mid, walls[static_cast<std::size_t>(w)])) {
                    wall = w;
                    break;
                }
            assert(wall >= 0);
            support = walls[static_cast<std::size_t>(wall)];
            src = {BoundarySource::BboxPortion, wall};
        }
        Rat la = ray_line_param(p, d0, support);
        Rat lb = ray_line_param(p, d1, support);
        pieces.push_back({Point(p.x + la * d0.x, p.y + la * d0.y),
                          Point(p.x + lb * d1.x, p.y + lb * d1.y), src});
    }

    // Assemble the boundary; insert radial window edges where consecutive
    // pieces do not share a vertex.
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const Piece& cur = pieces[k];
        const Piece& nxt = pieces[(k + 1) % pieces.size()];
        out.boundary.push_back(cur.a);
        out.boundary_sources.push_back(cur.src);
        if (cur.b != nxt.a) {
            out.boundary.push_back(cur.b);
            out.boundary_sources.push_back({BoundarySource::Window, -1});
        }
    }
    // Compress consecutive duplicate vertices (same-object wedge joints).
    {
        std::vector<Point> bd;
        std::vector<BoundarySource> srcs;
        for (std::size_t k = 0; k < out.boundary.size(); ++k) {
            if (!bd.empty() && bd.back() == out.boundary[k]) continue;
            bd.push_back(out.boundary[k]);
            srcs.push_back(out.boundary_sources[k]);
        }
        if (bd.size() > 1 && bd.front() == bd.back()) {
            bd.pop_back();
            srcs.pop_back();
        }
        out.boundary = std::move(bd);
        out.boundary_sources = std::move(srcs);
    }

    out.visible_segment_ids.assign(ids.begin(), ids.end());
    return out;
}

CountResult visible_count_oracle(const Point& p, const Scene& scene) {
    require_in_box(p, scene, "visible_count_oracle");
    CountResult res;
    if (scene.bbox.contains_open(p) && scene.segment_containing(p) < 0) {
        VisibilityPolygon vp = visibility_polygon(p, scene);
        res.visible_set = vp.visible_segment_ids;
    } else {
        for (int i = 0; i < scene.size(); ++i)
            if (sees_segment(p, i, scene)) res.visible_set.push_back(i);
    }
    res.m_p = static_cast<int>(res.visible_set.size());
    return res;
}

int visible_endpoint_count(const Point& p, const Scene& scene) {
    require_in_box(p, scene, "visible_endpoint_count");
    if (scene.segment_containing(p) >= 0)
        throw PointOnObstacle("visible_endpoint_count: point lies on an obstacle");
    int count = 0;
    for (int k = 0; k < scene.endpoint_count(); ++k)
        if (sees_point(p, scene.endpoint(k), scene)) ++count;
    return count;
}

} // namespace viscount
