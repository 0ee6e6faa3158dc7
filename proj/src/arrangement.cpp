#include "viscount/arrangement.h"

#include "viscount/errors.h"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace viscount {

TrapArrangement build_trap_map(const std::vector<CriticalEdge>& edges, const Scene& scene,
                               std::uint64_t seed) {
    TrapArrangement arr;
    arr.edges = edges;

    // Split every edge at every contact with another edge (proper crossings
    // and T-junctions alike); the trapezoid builder requires subsegments
    // whose relative interiors are vertex-free.
    std::vector<std::vector<Rat>> cuts(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            SegmentIntersection x = segment_intersection(edges[i].seg, edges[j].seg);
            if (x.kind == SegmentIntersection::Overlap)
                throw OverlapError("critical edges " + std::to_string(i) + " and " +
                                   std::to_string(j) + " overlap");
            if (x.kind != SegmentIntersection::SinglePoint) continue;
            ++arr.crossing_count;
            for (std::size_t k : {i, j}) {
                const Segment& s = edges[k].seg;
                Rat dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
                Rat t = sign(dx) != 0 ? (x.point.x - s.a.x) / dx : (x.point.y - s.a.y) / dy;
                if (sign(t) > 0 && t < 1) cuts[k].push_back(t);
            }
        }
    }

    // Solid intervals: parts of a critical edge covered by input obstacles.
    std::vector<std::vector<std::pair<Rat, Rat>>> solid(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Segment& s = edges[i].seg;
        Rat dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
        for (int k = 0; k < scene.size(); ++k) {
            const Segment& ob = scene.seg(k);
            if (!point_on_segment(ob.a, s) || !point_on_segment(ob.b, s)) continue;
            Rat ta = sign(dx) != 0 ? (ob.a.x - s.a.x) / dx : (ob.a.y - s.a.y) / dy;
            Rat tb = sign(dx) != 0 ? (ob.b.x - s.a.x) / dx : (ob.b.y - s.a.y) / dy;
            if (ta > tb) std::swap(ta, tb);
            solid[i].emplace_back(std::move(ta), std::move(tb));
        }
    }

    std::vector<TrapMap::Input> subs;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::vector<Rat>& c = cuts[i];
        c.push_back(Rat(0));
        c.push_back(Rat(1));
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        const Segment& s = edges[i].seg;
        Rat dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
        auto at = [&](const Rat& t) { return Point(s.a.x + t * dx, s.a.y + t * dy); };
        for (std::size_t k = 0; k + 1 < c.size(); ++k) {
            TrapMap::Input in;
            in.seg = Segment(at(c[k]), at(c[k + 1]));
            in.parent = static_cast<int>(i);
            subs.push_back(std::move(in));
            Rat mid = (c[k] + c[k + 1]) / 2;
            bool inside = false;
            for (const auto& [lo, hi] : solid[i])
                if (lo <= mid && mid <= hi) { inside = true; break; }
            arr.sub_solid.push_back(inside ? 1 : 0);
        }
    }

    arr.trapmap = std::make_unique<TrapMap>(std::move(subs), scene.bbox, seed);
    return arr;
}

namespace {

std::vector<int> resolve_label(const std::vector<int>& base, const std::set<int>& pending,
                               const Point& rep, const Scene& scene) {
    std::vector<int> out;
    for (int c : base)
        if (!pending.count(c)) out.push_back(c);
    for (int c : pending)
        if (sees_segment(rep, c, scene)) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

FaceLabels label_faces(const TrapArrangement& arr, const Scene& scene, LabelMode mode,
                       int audit_every) {
    const TrapMap& tm = *arr.trapmap;
    FaceLabels fl;
    fl.label.resize(tm.traps().size());
    fl.labeled.assign(tm.traps().size(), 0);

    if (mode == LabelMode::OracleDirect) {
        for (int id : tm.live()) {
            if (tm.is_sliver(id)) continue;
            fl.label[static_cast<std::size_t>(id)] =
                visible_count_oracle(tm.representative(id), scene).visible_set;
            fl.labeled[static_cast<std::size_t>(id)] = 1;
        }
        return fl;
    }

    // Trapezoids joined by vertical walls lie in one arrangement face and
    // share a label; contract them first so each face is resolved once. Only
    // positive-width trapezoids take part: zero-width slivers are symbolic
    // artifacts whose wall contacts can alias distinct faces, so faces that
    // touch solely through slivers are settled by the oracle instead.
    const std::size_t nt = tm.traps().size();
    std::vector<int> parent(nt);
    for (std::size_t i = 0; i < nt; ++i) parent[i] = static_cast<int>(i);
    auto find = [&parent](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };

    std::vector<TrapMap::Adjacency> adjs = tm.adjacencies();
    for (const TrapMap::Adjacency& adj : adjs)
        if (adj.kind == TrapMap::Adjacency::Wall && !tm.is_sliver(adj.a) && !tm.is_sliver(adj.b))
            parent[static_cast<std::size_t>(find(adj.a))] = find(adj.b);

    // One representative trapezoid per face.
    std::vector<int> face_rep(nt, -1);
    for (int id : tm.live())
        if (!tm.is_sliver(id) && face_rep[static_cast<std::size_t>(find(id))] < 0)
            face_rep[static_cast<std::size_t>(find(id))] = id;

    // Face graph: edges across non-solid critical-edge pieces.
    std::vector<std::vector<std::pair<int, int>>> fnbr(nt); // (face, subsegment)
    for (const TrapMap::Adjacency& adj : adjs) {
        if (adj.kind != TrapMap::Adjacency::AcrossSegment) continue;
        if (tm.is_sliver(adj.a) || tm.is_sliver(adj.b)) continue;
        if (arr.sub_solid[static_cast<std::size_t>(adj.subsegment)]) continue;
        int fa = find(adj.a), fb = find(adj.b);
        if (fa == fb) continue;
        fnbr[static_cast<std::size_t>(fa)].push_back({fb, adj.subsegment});
        fnbr[static_cast<std::size_t>(fb)].push_back({fa, adj.subsegment});
    }

    std::vector<std::vector<int>> face_label(nt);
    std::vector<char> face_done(nt, 0);
    int since_audit = 0;
    std::deque<int> queue;

    auto settle_face = [&](int face, const std::vector<int>& base,
                           const std::vector<int>& crossed_colors) {
        Point rep = tm.representative(face_rep[static_cast<std::size_t>(face)]);
        std::set<int> pending(crossed_colors.begin(), crossed_colors.end());
        std::vector<int> label = resolve_label(base, pending, rep, scene);
        if (audit_every > 0 && ++since_audit >= audit_every) {
            since_audit = 0;
            std::vector<int> truth = visible_count_oracle(rep, scene).visible_set;
            ++fl.audited;
            if (truth != label)
                throw VerificationMismatch(
                    "face label disagrees with the oracle at a representative point");
        }
        face_label[static_cast<std::size_t>(face)] = std::move(label);
        face_done[static_cast<std::size_t>(face)] = 1;
        queue.push_back(face);
    };

    for (int id : tm.live()) {
        if (tm.is_sliver(id)) continue;
        int face = find(id);
        face_label[static_cast<std::size_t>(face)] =
            visible_count_oracle(tm.representative(face_rep[static_cast<std::size_t>(face)]),
                                 scene)
                .visible_set;
        face_done[static_cast<std::size_t>(face)] = 1;
        queue.push_back(face);
        break;
    }
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (auto [nxt, crossed] : fnbr[static_cast<std::size_t>(cur)]) {
            if (face_done[static_cast<std::size_t>(nxt)]) continue;
            int src = tm.subsegments()[static_cast<std::size_t>(crossed)].parent;
            settle_face(nxt, face_label[static_cast<std::size_t>(cur)],
                        arr.edges[static_cast<std::size_t>(src)].colors);
        }
    }

    // Store per-trapezoid labels; faces the BFS never reached fall back to
    // the oracle.
    for (int id : tm.live()) {
        if (tm.is_sliver(id)) continue;
        int face = find(id);
        if (!face_done[static_cast<std::size_t>(face)]) {
            face_label[static_cast<std::size_t>(face)] =
                visible_count_oracle(tm.representative(id), scene).visible_set;
            face_done[static_cast<std::size_t>(face)] = 1;
            ++fl.bfs_unreached;
        }
        fl.label[static_cast<std::size_t>(id)] = face_label[static_cast<std::size_t>(face)];
        fl.labeled[static_cast<std::size_t>(id)] = 1;
    }
    return fl;
}

int locate(const TrapArrangement& arr, const Point& p) { return arr.trapmap->locate(p); }

BaselineResult baseline_query(const TrapArrangement& arr, const FaceLabels& labels,
                              const Scene& scene, const Point& p) {
    if (!scene.bbox.contains_closed(p)) throw OutOfBounds("baseline_query: point outside box");
    BaselineResult res;
    if (scene.bbox.contains_open(p)) {
        try {
            int t = arr.trapmap->locate(p);
            if (labels.labeled[static_cast<std::size_t>(t)]) {
                res.count.visible_set = labels.label[static_cast<std::size_t>(t)];
                res.count.m_p = static_cast<int>(res.count.visible_set.size());
                return res;
            }
        } catch (const OnBoundary&) {
        }
    }
    res.used_fallback = true;
    res.count = visible_count_oracle(p, scene);
    return res;
}

ArrangementStats arrangement_stats(const TrapArrangement& arr, const FaceLabels& labels) {
    ArrangementStats st;
    st.crossings = arr.crossing_count;
    std::map<int, long> hist;
    for (int id : arr.trapmap->live()) {
        if (arr.trapmap->is_sliver(id)) {
            ++st.slivers;
            continue;
        }
        ++st.trapezoids;
        if (labels.labeled[static_cast<std::size_t>(id)])
            ++hist[static_cast<int>(labels.label[static_cast<std::size_t>(id)].size())];
    }
    st.label_histogram.assign(hist.begin(), hist.end());
    return st;
}

} // namespace viscount
