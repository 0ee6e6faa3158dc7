#include "viscount/cutting.h"

#include "viscount/errors.h"
#include "viscount/rng.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <set>

namespace viscount {

namespace {

// Smallest r >= 2 with r >= |E|^(1-alpha). For small exponent denominators
// the comparison r^p >= E^q is settled exactly in integers; otherwise the
// long-double estimate is used with a one-ulp guard.
int cutting_sample_size(std::size_t e_count, const Rat& alpha) {
    Rat expo = 1 - alpha; // q/p in lowest terms
    mpz_class q = expo.get_num(), p = expo.get_den();
    long double est = powl(static_cast<long double>(e_count),
                           static_cast<long double>(expo.get_d()));
    long r = static_cast<long>(ceill(est - 1e-9L));
    if (r < 2) r = 2;
    if (p <= 64 && q <= 64) {
        auto ge = [&](long cand) {
            mpz_class lhs, rhs;
            mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(cand), p.get_ui());
            mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(e_count), q.get_ui());
            return lhs >= rhs;
        };
        while (r > 2 && ge(r - 1)) --r;
        while (!ge(r)) ++r;
    }
    if (r > static_cast<long>(e_count)) r = static_cast<long>(e_count);
    if (r < 2) r = 2;
    return static_cast<int>(r);
}

bool collinear_overlap(const Segment& a, const Segment& b) {
    return segment_intersection(a, b).kind == SegmentIntersection::Overlap;
}

} // namespace

int Cutting::locate_cell(const Point& p) const {
    int trap = trapmap->locate(p);
    const auto& pair = trap_cells[static_cast<std::size_t>(trap)];
    if (pair[1] < 0) {
        if (pair[0] < 0) throw OnBoundary("point in a degenerate trapezoid");
        return pair[0];
    }
    Containment c = point_in_triangle(p, cells[static_cast<std::size_t>(pair[0])]);
    if (c == Containment::Inside) return pair[0];
    if (c == Containment::Boundary) throw OnBoundary("point on a cell diagonal");
    c = point_in_triangle(p, cells[static_cast<std::size_t>(pair[1])]);
    if (c == Containment::Inside) return pair[1];
    throw OnBoundary("point on a cell boundary");
}

std::vector<int> Cutting::cells_touching(const Segment& s) const {
    std::vector<int> out;
    for (int trap : trapmap->locate_segment(s)) {
        const auto& pair = trap_cells[static_cast<std::size_t>(trap)];
        for (int c : pair)
            if (c >= 0) out.push_back(c);
    }
    return out;
}

Cutting build_cutting(const Cover& cover, const Scene& scene, const CuttingConfig& cfg,
                      std::uint64_t seed) {
    if (sign(cfg.alpha) <= 0 || cfg.alpha >= 1)
        throw ConfigError("alpha must lie strictly between 0 and 1");
    std::size_t e_count = cover.edges.size();
    if (e_count < 2) throw ConfigError("cover edge set too small to sample");

    int r = cutting_sample_size(e_count, cfg.alpha);

    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        Cutting cut;
        cut.alpha = cfg.alpha;
        cut.r = r;
        cut.retry_count = attempt;

        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        std::vector<std::size_t> ids =
            rng.sample_without_replacement(e_count, static_cast<std::size_t>(r));
        std::sort(ids.begin(), ids.end());
        cut.sample_edge_ids.assign(ids.begin(), ids.end());

        // Sampled cover edges may overlap collinearly (wall pieces stack up);
        // the trapezoid builder needs them merged into maximal chains.
        std::vector<Segment> sampled;
        sampled.reserve(ids.size());
        for (std::size_t id : ids) sampled.push_back(cover.edge_geom(static_cast<int>(id)));
        std::vector<CriticalEdge> merged;
        for (const MergedSegment& m : merge_collinear(sampled))
            merged.push_back({m.seg, {}});

        TrapArrangement arr =
            build_trap_map(merged, scene, seed + 7777 + static_cast<std::uint64_t>(attempt));
        cut.trapmap = std::move(arr.trapmap);
        const TrapMap& tm = *cut.trapmap;

        cut.trap_cells.assign(tm.traps().size(), {-1, -1});
        for (int id : tm.live()) {
            if (tm.is_sliver(id)) continue;
            Point bl = tm.corner(id, false, false);
            Point br = tm.corner(id, true, false);
            Point tr = tm.corner(id, true, true);
            Point tl = tm.corner(id, false, true);
            std::vector<Triangle> tris;
            if (bl == tl) tris.push_back(Triangle{bl, br, tr});
            else if (br == tr) tris.push_back(Triangle{bl, br, tl});
            else {
                tris.push_back(Triangle{bl, br, tr});
                tris.push_back(Triangle{bl, tr, tl});
            }
            int emitted = 0;
            for (std::size_t k = 0; k < tris.size(); ++k) {
                // Sampled edges on the box boundary squeeze out zero-area
                // trapezoids; those carry no cells.
                if (sign(triangle_area2(tris[k])) <= 0) continue;
                int cid = static_cast<int>(cut.cells.size());
                cut.cells.push_back(tris[k]);
                cut.cell_trap.push_back(id);
                cut.trap_cells[static_cast<std::size_t>(id)][static_cast<std::size_t>(emitted++)] =
                    cid;
            }
        }

        cut.crossing.assign(cut.cells.size(), {});
        cut.boundary_edges.assign(cut.cells.size(), {});
        for (std::size_t ei = 0; ei < e_count; ++ei) {
            Segment eseg = cover.edge_geom(static_cast<int>(ei));
            for (int trap : tm.locate_segment(eseg)) {
                for (int cid : cut.trap_cells[static_cast<std::size_t>(trap)]) {
                    if (cid < 0) continue;
                    const Triangle& tri = cut.cells[static_cast<std::size_t>(cid)];
                    if (segment_crosses_triangle_interior(eseg, tri)) {
                        cut.crossing[static_cast<std::size_t>(cid)].push_back(
                            static_cast<int>(ei));
                    } else {
                        for (const Segment& side :
                             {Segment(tri.v0, tri.v1), Segment(tri.v1, tri.v2),
                              Segment(tri.v2, tri.v0)}) {
                            if (collinear_overlap(eseg, side)) {
                                cut.boundary_edges[static_cast<std::size_t>(cid)].push_back(
                                    static_cast<int>(ei));
                                break;
                            }
                        }
                    }
                }
            }
        }

        cut.max_crossing = 0;
        for (const auto& list : cut.crossing)
            cut.max_crossing = std::max(cut.max_crossing, static_cast<long>(list.size()));
        cut.crossing_bound = cfg.crossing_bound_constant *
                             (static_cast<double>(e_count) / r) * std::log(static_cast<double>(r));
        double cell_bound = cfg.cell_bound_constant * static_cast<double>(r) * r;

        if (static_cast<double>(cut.max_crossing) <= cut.crossing_bound &&
            static_cast<double>(cut.cells.size()) <= cell_bound) {
            // Cell connectivity: sibling cells share the diagonal; adjacent
            // trapezoids connect through their first cells; sliver chains
            // collapse to stars between the real trapezoids they touch.
            cut.adjacency.assign(cut.cells.size(), {});
            auto connect = [&](int a, int b) {
                if (a < 0 || b < 0 || a == b) return;
                cut.adjacency[static_cast<std::size_t>(a)].push_back(b);
                cut.adjacency[static_cast<std::size_t>(b)].push_back(a);
            };
            std::vector<std::vector<int>> trap_nbrs(tm.traps().size());
            for (const TrapMap::Adjacency& adj : tm.adjacencies()) {
                trap_nbrs[static_cast<std::size_t>(adj.a)].push_back(adj.b);
                trap_nbrs[static_cast<std::size_t>(adj.b)].push_back(adj.a);
            }
            for (int id : tm.live()) {
                const auto& pair = cut.trap_cells[static_cast<std::size_t>(id)];
                connect(pair[0], pair[1]);
                if (tm.is_sliver(id)) continue;
                for (int nb : trap_nbrs[static_cast<std::size_t>(id)]) {
                    if (!tm.is_sliver(nb)) {
                        connect(pair[0], cut.trap_cells[static_cast<std::size_t>(nb)][0]);
                    }
                }
            }
            // Sliver components relay connectivity between real trapezoids.
            std::vector<char> seen(tm.traps().size(), 0);
            for (int id : tm.live()) {
                if (!tm.is_sliver(id) || seen[static_cast<std::size_t>(id)]) continue;
                std::vector<int> stack = {id};
                std::vector<int> reals;
                seen[static_cast<std::size_t>(id)] = 1;
                while (!stack.empty()) {
                    int cur = stack.back();
                    stack.pop_back();
                    for (int nb : trap_nbrs[static_cast<std::size_t>(cur)]) {
                        if (tm.is_sliver(nb)) {
                            if (!seen[static_cast<std::size_t>(nb)]) {
                                seen[static_cast<std::size_t>(nb)] = 1;
                                stack.push_back(nb);
                            }
                        } else {
                            reals.push_back(cut.trap_cells[static_cast<std::size_t>(nb)][0]);
                        }
                    }
                }
                for (std::size_t k = 1; k < reals.size(); ++k) connect(reals[0], reals[k]);
            }
            return cut;
        }
        if (attempt == cfg.max_retries)
            throw RetryExhausted(
                "cutting bounds not met after " + std::to_string(attempt + 1) +
                " attempts: max crossing " + std::to_string(cut.max_crossing) + " vs bound " +
                std::to_string(cut.crossing_bound) + ", cells " +
                std::to_string(cut.cells.size()) + " vs bound " + std::to_string(cell_bound));
    }
    throw RetryExhausted("unreachable");
}

namespace {

std::vector<int> candidate_edges(const Cutting& cutting, const Segment& walk) {
    std::vector<int> ids;
    for (int cid : cutting.cells_touching(walk)) {
        const auto& cross = cutting.crossing[static_cast<std::size_t>(cid)];
        const auto& bound = cutting.boundary_edges[static_cast<std::size_t>(cid)];
        ids.insert(ids.end(), cross.begin(), cross.end());
        ids.insert(ids.end(), bound.begin(), bound.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

int correction_walk(const Point& q1, int count_at_q1, const Point& q2, const Scene& scene,
                    const Cover& cover, const Cutting& cutting, WalkStats* stats) {
    if (q1 == q2) {
        if (stats) *stats = WalkStats{};
        return count_at_q1;
    }
    Segment walk(q1, q2);
    std::vector<int> candidates = candidate_edges(cutting, walk);

    const Rat& lox = q1.x <= q2.x ? q1.x : q2.x;
    const Rat& hix = q1.x <= q2.x ? q2.x : q1.x;
    const Rat& loy = q1.y <= q2.y ? q1.y : q2.y;
    const Rat& hiy = q1.y <= q2.y ? q2.y : q1.y;

    std::set<int> colors;
    for (int e : candidates) {
        Segment eseg = cover.edge_geom(e);
        // Cheap exact reject before the full intersection test.
        if ((eseg.a.x < lox && eseg.b.x < lox) || (eseg.a.x > hix && eseg.b.x > hix) ||
            (eseg.a.y < loy && eseg.b.y < loy) || (eseg.a.y > hiy && eseg.b.y > hiy))
            continue;
        if (point_on_segment(q1, eseg) || point_on_segment(q2, eseg))
            throw DegeneratePath("walk endpoint lies on a cover edge");
        if (segment_intersection(walk, eseg).kind == SegmentIntersection::Empty) continue;
        for (int c : cover.edges[static_cast<std::size_t>(e)].colors) colors.insert(c);
    }

    int delta = 0;
    for (int c : colors) {
        bool s1 = sees_segment(q1, c, scene);
        bool s2 = sees_segment(q2, c, scene);
        if (!s1 && s2) ++delta;
        if (s1 && !s2) --delta;
    }
    if (stats) {
        stats->candidate_edges_scanned = static_cast<long>(candidates.size());
        stats->colors_tested = static_cast<int>(colors.size());
        stats->corrections = delta;
    }
    return count_at_q1 + delta;
}

namespace {

Point draw_representative(const Triangle& tri, Rng& rng, int attempt) {
    // Seeded jitter around the centroid, then snapped to coarse dyadics so
    // the stored point stays cheap in every later exact test. R bounds the
    // L-infinity move that provably stays inside all three edges.
    Point c((tri.v0.x + tri.v1.x + tri.v2.x) / 3, (tri.v0.y + tri.v1.y + tri.v2.y) / 3);
    Rat R;
    bool first = true;
    for (const auto& [a, b] : {std::pair{tri.v0, tri.v1}, std::pair{tri.v1, tri.v2},
                               std::pair{tri.v2, tri.v0}}) {
        Rat f = cross2(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
        Rat denom = abs(b.x - a.x) + abs(b.y - a.y);
        Rat r = f / denom;
        if (first || r < R) R = r;
        first = false;
    }
    R /= 2;
    Rat ju = rat_from_dyadic(rng.next() >> 44, 20) - make_rat(1, 2);
    Rat jv = rat_from_dyadic(rng.next() >> 44, 20) - make_rat(1, 2);
    Rat tx = c.x + ju * R;
    Rat ty = c.y + jv * R;
    int bits = attempt; // finer grid on redraws so repeats cannot collide
    return Point(simplest_dyadic_between(tx - R / 2, tx + R / 2, bits),
                 simplest_dyadic_between(ty - R / 2, ty + R / 2, bits));
}

} // namespace

std::vector<IndexCell> build_index(const Scene& scene, const Cover& cover,
                                   const Cutting& cutting, const CuttingConfig& cfg,
                                   std::uint64_t seed) {
    const std::size_t n_cells = cutting.cells.size();
    std::vector<IndexCell> out(n_cells);
    Rng rng(seed ^ 0x5eed5eed5eed5eedULL);

    // Draw general-position representatives: re-draw while the point lies on
    // any cover edge known to meet the cell (that includes every obstacle
    // portion inside it).
    for (std::size_t c = 0; c < n_cells; ++c) {
        const Triangle& tri = cutting.cells[c];
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 256) throw Error("could not draw a representative point");
            Point p = draw_representative(tri, rng, attempt);
            bool clean = true;
            for (const auto* list : {&cutting.crossing[c], &cutting.boundary_edges[c]}) {
                for (int e : *list)
                    if (point_on_segment(p, cover.edge_geom(e))) {
                        clean = false;
                        break;
                    }
                if (!clean) break;
            }
            if (clean) {
                out[c].rep = p;
                break;
            }
        }
    }

    // Counts by breadth-first corrections over the connectivity graph.
    std::vector<char> done(n_cells, 0);
    int audited = 0, since_audit = 0;
    std::deque<int> queue;

    auto settle = [&](int cell, int from) {
        if (from < 0) {
            out[static_cast<std::size_t>(cell)].count =
                visible_count_oracle(out[static_cast<std::size_t>(cell)].rep, scene).m_p;
        } else {
            out[static_cast<std::size_t>(cell)].count = correction_walk(
                out[static_cast<std::size_t>(from)].rep, out[static_cast<std::size_t>(from)].count,
                out[static_cast<std::size_t>(cell)].rep, scene, cover, cutting);
            if (cfg.audit_every > 0 && ++since_audit >= cfg.audit_every) {
                since_audit = 0;
                ++audited;
                int truth =
                    visible_count_oracle(out[static_cast<std::size_t>(cell)].rep, scene).m_p;
                if (truth != out[static_cast<std::size_t>(cell)].count)
                    throw VerificationMismatch(
                        "preprocessing walk disagrees with the oracle at cell " +
                        std::to_string(cell));
            }
        }
        done[static_cast<std::size_t>(cell)] = 1;
        queue.push_back(cell);
    };

    for (std::size_t c = 0; c < n_cells; ++c) {
        if (done[c]) continue;
        settle(static_cast<int>(c), -1); // new component: one oracle evaluation
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            for (int nb : cutting.adjacency[static_cast<std::size_t>(cur)])
                if (!done[static_cast<std::size_t>(nb)]) settle(nb, cur);
        }
    }
    (void)audited;
    return out;
}

VisibilityIndex build_visibility_index(const Scene& scene, const CuttingConfig& cfg,
                                       std::uint64_t seed) {
    VisibilityIndex index;
    index.scene = scene;
    index.config = cfg;
    index.seed = seed;

    Evg evg = build_evg(scene);
    index.evg_m = evg.m;
    std::vector<CriticalEdge> crit = critical_edge_set(evg, scene);
    TrapArrangement arr = build_trap_map(crit, scene, seed);
    FaceLabels labels = label_faces(arr, scene, LabelMode::BfsCorrected, 50);
    index.cover = build_cover(arr, labels);
    index.cutting = build_cutting(index.cover, scene, cfg, seed);
    index.cells = build_index(scene, index.cover, index.cutting, cfg, seed);
    return index;
}

QueryResult query_components(const Scene& scene, const Cover& cover, const Cutting& cutting,
                             const std::vector<IndexCell>& cells, const Point& p) {
    if (!scene.bbox.contains_closed(p)) throw OutOfBounds("query point outside the box");

    QueryResult res;
    auto fallback = [&]() {
        res.used_fallback = true;
        res.m_p = visible_count_oracle(p, scene).m_p;
        return res;
    };

    if (!scene.bbox.contains_open(p)) return fallback();

    int cell;
    try {
        cell = cutting.locate_cell(p);
    } catch (const OnBoundary&) {
        return fallback();
    }
    res.cell = cell;

    const IndexCell& ic = cells[static_cast<std::size_t>(cell)];
    try {
        WalkStats stats;
        res.m_p = correction_walk(ic.rep, ic.count, p, scene, cover, cutting, &stats);
        res.candidate_edges_scanned = stats.candidate_edges_scanned;
        res.colors_tested = stats.colors_tested;
        res.corrections = stats.corrections;
    } catch (const DegeneratePath&) {
        return fallback();
    }
    return res;
}

QueryResult query(const VisibilityIndex& index, const Point& p) {
    return query_components(index.scene, index.cover, index.cutting, index.cells, p);
}

} // namespace viscount
