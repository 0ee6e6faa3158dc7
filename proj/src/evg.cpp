#include "viscount/evg.h"

#include "viscount/errors.h"
#include "viscount/visibility.h"

#include <algorithm>
#include <cassert>
#include <optional>
#include <ostream>
#include <set>

namespace viscount {

std::vector<std::pair<int, int>> build_vg(const Scene& scene) {
    std::vector<std::pair<int, int>> pairs;
    int ne = scene.endpoint_count();
    for (int i = 0; i < ne; ++i) {
        for (int j = i + 1; j < ne; ++j) {
            if (i / 2 == j / 2) {
                // The segment itself is an edge of the graph.
                pairs.emplace_back(i, j);
                continue;
            }
            // The open sight line excludes both endpoints, which is exactly
            // the required exemption: each endpoint's own segment can only
            // block by genuinely covering part of the sight line.
            if (sees_point(scene.endpoint(i), scene.endpoint(j), scene))
                pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

namespace {

// First hit of the ray origin + t*dir strictly beyond t0 against a closed
// segment; returns the smallest such t, together with exactness about the
// degenerate collinear-contact case (hit approaching t0 itself).
std::optional<Rat> hit_beyond(const Point& origin, const Point& dir, const Segment& s,
                              const Rat& t0) {
    Rat wx = s.b.x - s.a.x, wy = s.b.y - s.a.y;
    Rat qx = s.a.x - origin.x, qy = s.a.y - origin.y;
    Rat denom = cross2(dir.x, dir.y, wx, wy);
    if (sign(denom) != 0) {
        Rat lambda = cross2(qx, qy, wx, wy) / denom;
        Rat mu = cross2(qx, qy, dir.x, dir.y) / denom;
        if (lambda > t0 && sign(mu) >= 0 && mu <= 1) return lambda;
        return std::nullopt;
    }
    if (sign(cross2(qx, qy, dir.x, dir.y)) != 0) return std::nullopt;
    Rat dd = dot2(dir.x, dir.y, dir.x, dir.y);
    Rat la = dot2(qx, qy, dir.x, dir.y) / dd;
    Rat lb = dot2(s.b.x - origin.x, s.b.y - origin.y, dir.x, dir.y) / dd;
    Rat mn = std::min(la, lb), mx = std::max(la, lb);
    if (mx <= t0) return std::nullopt;
    return mn > t0 ? mn : t0; // t0 marks an immediate collinear contact
}

} // namespace

Evg build_evg(const Scene& scene) {
    Evg evg;
    evg.vg_pairs = build_vg(scene);
    evg.incidence.assign(static_cast<std::size_t>(scene.size()), 0);
    const auto walls = scene.walls();

    for (auto [ei, ej] : evg.vg_pairs) {
        Point u = scene.endpoint(ei);
        Point v = scene.endpoint(ej);
        EvgEdge edge;
        edge.kind = EvgEdge::Vg;
        edge.seg = Segment(u, v);
        edge.incident_ids = {ei / 2};
        if (ej / 2 != ei / 2) edge.incident_ids.push_back(ej / 2);
        std::sort(edge.incident_ids.begin(), edge.incident_ids.end());
        evg.edges.push_back(edge);

        // Extend beyond each end to the first obstacle or box hit.
        for (int end = 0; end < 2; ++end) {
            Point from = end == 0 ? u : v;
            Point through = end == 0 ? v : u;
            Point dir(through.x - from.x, through.y - from.y);
            Rat one(1);
            std::optional<Rat> best;
            int hit_seg = -1;
            for (int j = 0; j < scene.size(); ++j) {
                std::optional<Rat> h = hit_beyond(from, dir, scene.seg(j), one);
                if (h && (!best || *h < *best)) { best = *h; hit_seg = j; }
            }
            if (!best) {
                for (const Segment& w : walls) {
                    std::optional<Rat> h = hit_beyond(from, dir, w, one);
                    if (h && (!best || *h < *best)) best = *h;
                }
            }
            assert(best.has_value()); // the box always stops the ray
            if (*best == one) continue; // immediate collinear contact, no new edge
            Point hit(from.x + *best * dir.x, from.y + *best * dir.y);
            EvgEdge ext;
            ext.kind = EvgEdge::Extension;
            ext.seg = Segment(through, hit);
            if (hit_seg >= 0) ext.incident_ids = {hit_seg};
            evg.edges.push_back(ext);
        }
    }

    evg.m = static_cast<int>(evg.edges.size());
    for (const EvgEdge& e : evg.edges)
        for (int id : e.incident_ids)
            ++evg.incidence[static_cast<std::size_t>(id)];
    return evg;
}

std::vector<CriticalEdge> critical_edge_set(const Evg& evg, const Scene& scene) {
    (void)scene;
    std::vector<Segment> segs;
    segs.reserve(evg.edges.size());
    for (const EvgEdge& e : evg.edges) segs.push_back(e.seg);
    std::vector<MergedSegment> merged = merge_collinear(segs);

    std::vector<CriticalEdge> out;
    out.reserve(merged.size());
    for (const MergedSegment& m : merged) {
        std::set<int> colors;
        for (int src : m.source_ids)
            for (int id : evg.edges[static_cast<std::size_t>(src)].incident_ids)
                colors.insert(id);
        out.push_back({m.seg, std::vector<int>(colors.begin(), colors.end())});
    }
    return out;
}

void dump_evg(const Evg& evg, const Scene& scene, std::ostream& out) {
    save_scene(scene, out);
    out << "# edges: " << evg.m << "\n";
    for (const EvgEdge& e : evg.edges) {
        out << (e.kind == EvgEdge::Vg ? "vg " : "ext ") << rat_to_string(e.seg.a.x) << ' '
            << rat_to_string(e.seg.a.y) << ' ' << rat_to_string(e.seg.b.x) << ' '
            << rat_to_string(e.seg.b.y);
        for (int id : e.incident_ids) out << ' ' << id;
        out << '\n';
    }
}

} // namespace viscount
