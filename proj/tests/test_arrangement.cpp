#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "viscount/arrangement.h"
#include "viscount/errors.h"
#include "viscount/rng.h"

#include <set>

using namespace viscount;

namespace {

Scene scene_a() {
    Scene s;
    s.bbox = Box{Point(0, 0), Point(10, 10)};
    s.segments = {Segment(Point(4, 4), Point(6, 4))};
    return s;
}

Scene scene_b() {
    Scene s;
    s.bbox = Box{Point(0, 0), Point(10, 10)};
    s.segments = {Segment(Point(3, 5), Point(7, 5)),
                  Segment(Point(rat_from_string("3.5"), Rat(3)),
                          Point(rat_from_string("6.5"), Rat(3)))};
    return s;
}

int real_trap_count(const TrapMap& tm) {
    int n = 0;
    for (int id : tm.live())
        if (!tm.is_sliver(id)) ++n;
    return n;
}

Point random_point(Rng& rng, const Box& box) {
    Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
    Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
    return Point(box.lo.x + fx * box.width(), box.lo.y + fy * box.height());
}

Point random_interior_point(Rng& rng, const TrapMap& tm, int trap) {
    const TrapMap::Trap& t = tm.traps()[static_cast<std::size_t>(trap)];
    for (;;) {
        Rat fx = rat_from_dyadic(1 + (rng.next() >> 44), 21);
        Rat x = t.leftp.x + fx * (t.rightp.x - t.leftp.x);
        Point top = tm.corner(trap, false, true), bot;
        // Interpolate the top/bottom heights at x.
        Point tl = tm.corner(trap, false, true), tr = tm.corner(trap, true, true);
        Point bl = tm.corner(trap, false, false), br = tm.corner(trap, true, false);
        Rat w = t.rightp.x - t.leftp.x;
        Rat yt = tl.y + (x - t.leftp.x) * (tr.y - tl.y) / w;
        Rat yb = bl.y + (x - t.leftp.x) * (br.y - bl.y) / w;
        if (!(yb < yt)) continue;
        Rat fy = rat_from_dyadic(1 + (rng.next() >> 44), 21);
        (void)top;
        (void)bot;
        return Point(std::move(x), yb + fy * (yt - yb));
    }
}

} // namespace

TEST_CASE("empty edge set: one trapezoid over the box") {
    TrapArrangement arr = build_trap_map({}, scene_b(), 1);
    CHECK(real_trap_count(*arr.trapmap) == 1);
    arr.trapmap->validate_structure();
}

TEST_CASE("single interior horizontal edge: four trapezoids") {
    CriticalEdge e{Segment(Point(3, 5), Point(7, 5)), {0}};
    TrapArrangement arr = build_trap_map({e}, scene_b(), 1);
    CHECK(real_trap_count(*arr.trapmap) == 4);
    arr.trapmap->validate_structure();
}

TEST_CASE("single vertical edge is handled by the shear") {
    CriticalEdge e{Segment(Point(5, 2), Point(5, 8)), {0}};
    TrapArrangement arr = build_trap_map({e}, scene_b(), 1);
    // Left, right, above, below in shear terms; above/below degenerate to
    // slivers, leaving two real trapezoids and tiling preserved.
    arr.trapmap->validate_structure();
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        Point p = random_point(rng, scene_b().bbox);
        int by_scan = arr.trapmap->locate_by_scan(p);
        if (by_scan < 0) continue;
        CHECK(arr.trapmap->locate(p) == by_scan);
    }
}

TEST_CASE("crossing edges and T-junctions split cleanly") {
    std::vector<CriticalEdge> edges = {
        {Segment(Point(1, 5), Point(9, 5)), {0}},
        {Segment(Point(5, 1), Point(5, 9)), {1}},   // proper crossing at (5,5)
        {Segment(Point(2, 2), Point(5, 5)), {0, 1}}, // endpoint on the crossing
        {Segment(Point(7, 5), Point(8, 8)), {1}},   // T-junction on edge 0
    };
    TrapArrangement arr = build_trap_map(edges, scene_b(), 7);
    arr.trapmap->validate_structure();

    Rng rng(17);
    for (int k = 0; k < 300; ++k) {
        Point p = random_point(rng, scene_b().bbox);
        int by_scan = arr.trapmap->locate_by_scan(p);
        if (by_scan < 0) continue;
        CHECK(arr.trapmap->locate(p) == by_scan);
    }
}

TEST_CASE("overlapping edges are rejected") {
    std::vector<CriticalEdge> edges = {
        {Segment(Point(1, 5), Point(6, 5)), {0}},
        {Segment(Point(4, 5), Point(9, 5)), {1}},
    };
    CHECK_THROWS_AS(build_trap_map(edges, scene_b(), 1), OverlapError);
}

TEST_CASE("locate throws OnBoundary on edges and vertices") {
    CriticalEdge e{Segment(Point(3, 5), Point(7, 5)), {0}};
    TrapArrangement arr = build_trap_map({e}, scene_b(), 1);
    CHECK_THROWS_AS(arr.trapmap->locate(Point(5, 5)), OnBoundary);
    CHECK_THROWS_AS(arr.trapmap->locate(Point(3, 5)), OnBoundary);
}

TEST_CASE("random scenes: structure valid, locate agrees with linear scan") {
    for (std::uint64_t seed : {101ULL, 102ULL, 103ULL}) {
        Scene s = generate_random(6, Box{Point(0, 0), Point(100, 100)}, seed,
                                  GenerateOptions{Rat(5), Rat(40), 16, 4000});
        Evg evg = build_evg(s);
        auto crit = critical_edge_set(evg, s);
        TrapArrangement arr = build_trap_map(crit, s, seed);
        arr.trapmap->validate_structure();

        Rng rng(seed * 7 + 1);
        int located = 0;
        for (int k = 0; k < 300; ++k) {
            Point p = random_point(rng, s.bbox);
            int by_scan = arr.trapmap->locate_by_scan(p);
            if (by_scan < 0) continue; // on structure; locate() would throw
            ++located;
            CHECK(arr.trapmap->locate(p) == by_scan);
        }
        CHECK(located > 250);
    }
}

TEST_CASE("scene A: both faces see the single segment") {
    Scene a = scene_a();
    Evg evg = build_evg(a);
    auto crit = critical_edge_set(evg, a);
    TrapArrangement arr = build_trap_map(crit, a, 3);
    FaceLabels labels = label_faces(arr, a);
    for (int id : arr.trapmap->live()) {
        if (arr.trapmap->is_sliver(id)) continue;
        CHECK(labels.label[static_cast<std::size_t>(id)] == std::vector<int>{0});
    }
}

TEST_CASE("scene B: face labels at the spec's query points") {
    Scene b = scene_b();
    Evg evg = build_evg(b);
    auto crit = critical_edge_set(evg, b);
    TrapArrangement arr = build_trap_map(crit, b, 3);
    FaceLabels labels = label_faces(arr, b);

    int t1 = locate(arr, Point(5, 1));
    CHECK(labels.label[static_cast<std::size_t>(t1)] == std::vector<int>{1});
    int t2 = locate(arr, Point(make_rat(1, 2), Rat(4)));
    CHECK(labels.label[static_cast<std::size_t>(t2)] == std::vector<int>{0, 1});

    // Golden structure snapshot for insertion seed 3 (recorded from the
    // first verified build; determinism keeps it stable).
    CHECK(crit.size() == 6);
    CHECK(arr.crossing_count == 13);
    CHECK(real_trap_count(*arr.trapmap) == 30);
    TrapArrangement again = build_trap_map(crit, b, 3);
    CHECK(real_trap_count(*again.trapmap) == 30);
}

TEST_CASE("BFS-corrected labels equal direct oracle labels") {
    for (std::uint64_t seed : {201ULL, 202ULL}) {
        Scene s = generate_random(5, Box{Point(0, 0), Point(100, 100)}, seed,
                                  GenerateOptions{Rat(6), Rat(40), 16, 4000});
        Evg evg = build_evg(s);
        auto crit = critical_edge_set(evg, s);
        TrapArrangement arr = build_trap_map(crit, s, seed);
        FaceLabels bfs = label_faces(arr, s, LabelMode::BfsCorrected, 10);
        FaceLabels direct = label_faces(arr, s, LabelMode::OracleDirect);
        for (int id : arr.trapmap->live()) {
            if (arr.trapmap->is_sliver(id)) continue;
            CHECK(bfs.label[static_cast<std::size_t>(id)] ==
                  direct.label[static_cast<std::size_t>(id)]);
        }
        CHECK(bfs.bfs_unreached == 0);
    }
}

TEST_CASE("face constancy: random interior points match the face label") {
    Scene b = scene_b();
    Evg evg = build_evg(b);
    auto crit = critical_edge_set(evg, b);
    TrapArrangement arr = build_trap_map(crit, b, 9);
    FaceLabels labels = label_faces(arr, b);
    Rng rng(88);
    for (int id : arr.trapmap->live()) {
        if (arr.trapmap->is_sliver(id)) continue;
        for (int k = 0; k < 10; ++k) {
            Point p = random_interior_point(rng, *arr.trapmap, id);
            if (b.segment_containing(p) >= 0) continue;
            CountResult truth = visible_count_oracle(p, b);
            CHECK(truth.visible_set == labels.label[static_cast<std::size_t>(id)]);
        }
    }
}

TEST_CASE("baseline_query equals the oracle everywhere sampled") {
    for (std::uint64_t seed : {301ULL, 302ULL}) {
        Scene s = generate_random(6, Box{Point(0, 0), Point(100, 100)}, seed,
                                  GenerateOptions{Rat(6), Rat(40), 16, 4000});
        Evg evg = build_evg(s);
        auto crit = critical_edge_set(evg, s);
        TrapArrangement arr = build_trap_map(crit, s, seed);
        FaceLabels labels = label_faces(arr, s);
        Rng rng(seed + 5);
        for (int k = 0; k < 150; ++k) {
            Point p = random_point(rng, s.bbox);
            if (!s.bbox.contains_open(p)) continue;
            if (s.segment_containing(p) >= 0) continue;
            BaselineResult res = baseline_query(arr, labels, s, p);
            CountResult truth = visible_count_oracle(p, s);
            CHECK(res.count.visible_set == truth.visible_set);
        }
    }
}

TEST_CASE("areas partition the box exactly") {
    Scene b = scene_b();
    Evg evg = build_evg(b);
    auto crit = critical_edge_set(evg, b);
    TrapArrangement arr = build_trap_map(crit, b, 11);
    Rat total(0);
    for (int id : arr.trapmap->live()) total += arr.trapmap->area(id);
    CHECK(total == b.bbox.area());
}

TEST_CASE("baseline falls back to the oracle on boundary points") {
    Scene b = scene_b();
    Evg evg = build_evg(b);
    auto crit = critical_edge_set(evg, b);
    TrapArrangement arr = build_trap_map(crit, b, 13);
    FaceLabels labels = label_faces(arr, b);
    // (5,5) lies on s0 itself, hence on a critical edge.
    BaselineResult res = baseline_query(arr, labels, b, Point(5, 5));
    CHECK(res.used_fallback);
    CHECK(res.count.m_p == visible_count_oracle(Point(5, 5), b).m_p);
}
