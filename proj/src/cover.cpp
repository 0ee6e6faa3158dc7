#include "viscount/cover.h"

#include "viscount/rng.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace viscount {

namespace {

int pool_vertex(std::map<Point, int, PointLexLess>& pool, std::vector<Point>& vertices,
                const Point& p) {
    auto [it, inserted] = pool.emplace(p, static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back(p);
    return it->second;
}

} // namespace

Cover build_cover(const TrapArrangement& arr, const FaceLabels& labels) {
    const TrapMap& tm = *arr.trapmap;
    Cover cover;
    std::map<Point, int, PointLexLess> pool;
    std::map<std::pair<int, int>, std::set<int>> edge_colors;

    int n_colors = 0;
    for (int id : tm.live()) {
        if (tm.is_sliver(id) || !labels.labeled[static_cast<std::size_t>(id)]) continue;
        const std::vector<int>& label = labels.label[static_cast<std::size_t>(id)];
        if (label.empty()) continue;

        Point bl = tm.corner(id, false, false);
        Point br = tm.corner(id, true, false);
        Point tr = tm.corner(id, true, true);
        Point tl = tm.corner(id, false, true);
        int ibl = pool_vertex(pool, cover.vertices, bl);
        int ibr = pool_vertex(pool, cover.vertices, br);
        int itr = pool_vertex(pool, cover.vertices, tr);
        int itl = pool_vertex(pool, cover.vertices, tl);

        // Split along the bottom-left to top-right diagonal; pinched corners
        // leave a single triangle.
        std::vector<std::array<int, 3>> tris;
        if (ibl == itl) tris.push_back({ibl, ibr, itr});
        else if (ibr == itr) tris.push_back({ibl, ibr, itl});
        else {
            tris.push_back({ibl, ibr, itr});
            tris.push_back({ibl, itr, itl});
        }

        for (int c : label) {
            n_colors = std::max(n_colors, c + 1);
            for (const auto& t : tris) {
                Cover::Tri tri{t[0], t[1], t[2], c};
                int tid = static_cast<int>(cover.triangles.size());
                cover.triangles.push_back(tri);
                if (c >= static_cast<int>(cover.by_color.size()))
                    cover.by_color.resize(static_cast<std::size_t>(c) + 1);
                cover.by_color[static_cast<std::size_t>(c)].push_back(tid);
                for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]},
                                    std::pair{t[2], t[0]}}) {
                    if (a > b) std::swap(a, b);
                    edge_colors[{a, b}].insert(c);
                }
            }
        }
    }
    if (static_cast<int>(cover.by_color.size()) < n_colors)
        cover.by_color.resize(static_cast<std::size_t>(n_colors));

    cover.edges.reserve(edge_colors.size());
    for (auto& [key, colors] : edge_colors)
        cover.edges.push_back(
            Cover::Edge{key.first, key.second, std::vector<int>(colors.begin(), colors.end())});

    // Grid accelerator: register each triangle in the buckets its bounding
    // box overlaps.
    cover.grid_box = tm.box();
    cover.grid_n = 1;
    while (cover.grid_n * cover.grid_n < static_cast<long>(cover.triangles.size()) &&
           cover.grid_n < 128)
        cover.grid_n *= 2;
    cover.grid.assign(static_cast<std::size_t>(cover.grid_n) *
                          static_cast<std::size_t>(cover.grid_n),
                      {});
    for (std::size_t i = 0; i < cover.triangles.size(); ++i) {
        Triangle t = cover.geom(static_cast<int>(i));
        Rat xmin = std::min(std::min(t.v0.x, t.v1.x), t.v2.x);
        Rat xmax = std::max(std::max(t.v0.x, t.v1.x), t.v2.x);
        Rat ymin = std::min(std::min(t.v0.y, t.v1.y), t.v2.y);
        Rat ymax = std::max(std::max(t.v0.y, t.v1.y), t.v2.y);
        int ix0 = cover.grid_coord(xmin, cover.grid_box.lo.x, cover.grid_box.width());
        int ix1 = cover.grid_coord(xmax, cover.grid_box.lo.x, cover.grid_box.width());
        int iy0 = cover.grid_coord(ymin, cover.grid_box.lo.y, cover.grid_box.height());
        int iy1 = cover.grid_coord(ymax, cover.grid_box.lo.y, cover.grid_box.height());
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                cover.grid[static_cast<std::size_t>(iy) * static_cast<std::size_t>(cover.grid_n) +
                           static_cast<std::size_t>(ix)]
                    .push_back(static_cast<int>(i));
    }
    return cover;
}

int Cover::grid_coord(const Rat& v, const Rat& lo, const Rat& span) const {
    // floor((v - lo) * n / span), clamped into range; exact.
    Rat scaled = (v - lo) * grid_n / span;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    long idx = q.get_si();
    if (idx < 0) idx = 0;
    if (idx >= grid_n) idx = grid_n - 1;
    return static_cast<int>(idx);
}

const std::vector<int>& Cover::bucket(const Point& p) const {
    int ix = grid_coord(p.x, grid_box.lo.x, grid_box.width());
    int iy = grid_coord(p.y, grid_box.lo.y, grid_box.height());
    return grid[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid_n) +
                static_cast<std::size_t>(ix)];
}

Membership membership(const Cover& cover, const Point& p) {
    Membership m;
    std::map<int, int> mult;
    const bool use_grid = cover.grid_n > 0 && cover.grid_box.contains_closed(p);
    const std::vector<int>* candidates = use_grid ? &cover.bucket(p) : nullptr;
    std::size_t count = use_grid ? candidates->size() : cover.triangles.size();
    for (std::size_t k = 0; k < count; ++k) {
        int i = use_grid ? (*candidates)[k] : static_cast<int>(k);
        Containment c = point_in_triangle(p, cover.geom(i));
        if (c == Containment::Inside) {
            ++mult[cover.triangles[static_cast<std::size_t>(i)].color];
            ++m.total;
        } else if (c == Containment::Boundary) {
            m.on_boundary = true;
        }
    }
    for (auto [color, k] : mult) {
        m.colors.push_back(color);
        m.multiplicity.push_back(k);
    }
    return m;
}

CoverReport verify_cover(const Cover& cover, const Scene& scene, int sample_count,
                         std::uint64_t seed) {
    CoverReport report;
    Rng rng(seed);
    std::size_t tri_cursor = 0;

    int attempts = 0;
    while (report.samples_checked < sample_count && attempts < sample_count * 20) {
        ++attempts;
        Point p;
        if (attempts % 2 == 0 || cover.triangles.empty()) {
            Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
            Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
            p = Point(scene.bbox.lo.x + fx * scene.bbox.width(),
                      scene.bbox.lo.y + fy * scene.bbox.height());
        } else {
            // Probe inside each triangle in turn so every cover region gets
            // exercised even when it is tiny.
            Triangle t = cover.geom(static_cast<int>(tri_cursor));
            tri_cursor = (tri_cursor + 1) % cover.triangles.size();
            Rat u = rat_from_dyadic(1 + (rng.next() >> 44), 22);
            Rat v = rat_from_dyadic(1 + (rng.next() >> 44), 22);
            if (u + v >= 1) {
                u = 1 - u;
                v = 1 - v;
            }
            if (sign(u) <= 0 || sign(v) <= 0 || u + v >= 1) continue;
            p = Point(t.v0.x + u * (t.v1.x - t.v0.x) + v * (t.v2.x - t.v0.x),
                      t.v0.y + u * (t.v1.y - t.v0.y) + v * (t.v2.y - t.v0.y));
        }
        if (!scene.bbox.contains_open(p)) continue;
        if (scene.segment_containing(p) >= 0) continue;
        Membership m = membership(cover, p);
        if (m.on_boundary) continue;
        ++report.samples_checked;
        std::vector<int> truth = visible_count_oracle(p, scene).visible_set;
        if (m.colors != truth)
            report.counterexamples.push_back({p, m.colors, truth});
    }
    return report;
}

} // namespace viscount
