#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "viscount/cover.h"
#include "viscount/rng.h"

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

Cover cover_for(const Scene& s, std::uint64_t seed) {
    Evg evg = build_evg(s);
    auto crit = critical_edge_set(evg, s);
    TrapArrangement arr = build_trap_map(crit, s, seed);
    FaceLabels labels = label_faces(arr, s);
    return build_cover(arr, labels);
}

} // namespace

TEST_CASE("scene A: color 0 tiles all free space") {
    Scene a = scene_a();
    Cover cover = cover_for(a, 1);
    CHECK(cover.by_color.size() == 1);
    CHECK(cover.triangles.size() >= 2);

    Rng rng(9);
    for (int k = 0; k < 200; ++k) {
        Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
        Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
        Point p(fx * 10, fy * 10);
        if (!a.bbox.contains_open(p) || a.segment_containing(p) >= 0) continue;
        Membership m = membership(cover, p);
        if (m.on_boundary) continue;
        CHECK(m.colors == std::vector<int>{0});
        CHECK(m.total == 1);
    }
}

TEST_CASE("scene B: membership at the spec's points") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 2);

    Membership m = membership(cover, Point(5, 1));
    CHECK(m.colors == std::vector<int>{1});
    CHECK(m.multiplicity == std::vector<int>{1});

    m = membership(cover, Point(make_rat(1, 2), Rat(4)));
    CHECK(m.colors == std::vector<int>{0, 1});
    CHECK(m.multiplicity == std::vector<int>{1, 1});
}

TEST_CASE("per-color multiplicity is at most one; total equals m_p") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 3);
    Rng rng(31);
    int checked = 0;
    while (checked < 120) {
        Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
        Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
        Point p(fx * 10, fy * 10);
        if (!b.bbox.contains_open(p) || b.segment_containing(p) >= 0) continue;
        Membership m = membership(cover, p);
        if (m.on_boundary) continue;
        ++checked;
        for (int mult : m.multiplicity) CHECK(mult == 1);
        int m_p = visible_count_oracle(p, b).m_p;
        CHECK(m.total == m_p);
        // The paper's containment band, specialized by per-color disjointness.
        CHECK(m.total >= m_p);
        CHECK(m.total <= 2 * m_p);
    }
}

TEST_CASE("verify_cover finds no counterexamples on scenes A and B") {
    for (int which = 0; which < 2; ++which) {
        Scene s = which == 0 ? scene_a() : scene_b();
        Cover cover = cover_for(s, 4);
        CoverReport r = verify_cover(cover, s, 1000, 77);
        CHECK(r.samples_checked == 1000);
        CHECK(r.ok());
    }
}

TEST_CASE("verify_cover on random scenes") {
    for (std::uint64_t seed : {401ULL, 402ULL, 403ULL}) {
        Scene s = generate_random(6, Box{Point(0, 0), Point(100, 100)}, seed,
                                  GenerateOptions{Rat(6), Rat(40), 16, 4000});
        Cover cover = cover_for(s, seed);
        CoverReport r = verify_cover(cover, s, 400, seed * 3);
        CHECK(r.ok());
    }
}

TEST_CASE("mutation: deleting one triangle produces a counterexample") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 5);
    REQUIRE(!cover.triangles.empty());
    Cover broken = cover;
    // Remove a triangle and rebuild the per-color index accordingly; drop the
    // grid since triangle ids shift.
    broken.grid_n = 0;
    broken.grid.clear();
    std::size_t victim = broken.triangles.size() / 2;
    broken.triangles.erase(broken.triangles.begin() + static_cast<long>(victim));
    for (auto& v : broken.by_color) v.clear();
    for (std::size_t i = 0; i < broken.triangles.size(); ++i)
        broken.by_color[static_cast<std::size_t>(broken.triangles[i].color)].push_back(
            static_cast<int>(i));
    CoverReport r = verify_cover(broken, b, 1000, 78);
    CHECK_FALSE(r.ok());
}

TEST_CASE("empty sample budget yields an empty report") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 6);
    CoverReport r = verify_cover(cover, b, 0, 1);
    CHECK(r.samples_checked == 0);
    CHECK(r.ok());
}

TEST_CASE("edge set is deduplicated and bounded") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 7);
    CHECK(cover.edges.size() <= 3 * cover.triangles.size());
    for (std::size_t i = 0; i < cover.edges.size(); ++i) {
        CHECK(cover.edges[i].va < cover.edges[i].vb);
        CHECK(!cover.edges[i].colors.empty());
        for (std::size_t j = i + 1; j < cover.edges.size(); ++j) {
            bool same = cover.edges[i].va == cover.edges[j].va &&
                        cover.edges[i].vb == cover.edges[j].vb;
            CHECK_FALSE(same);
        }
    }
}

TEST_CASE("boundary coverage: differing visible sets cross a colored edge") {
    Scene b = scene_b();
    Cover cover = cover_for(b, 8);
    Rng rng(55);
    auto random_free = [&]() {
        for (;;) {
            Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
            Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
            Point p(fx * 10, fy * 10);
            if (b.bbox.contains_open(p) && b.segment_containing(p) < 0) return p;
        }
    };
    int tested = 0;
    while (tested < 60) {
        Point p = random_free();
        Point q = random_free();
        auto vp = visible_count_oracle(p, b).visible_set;
        auto vq = visible_count_oracle(q, b).visible_set;
        if (vp == vq) continue;
        ++tested;
        std::vector<int> diff;
        std::set_symmetric_difference(vp.begin(), vp.end(), vq.begin(), vq.end(),
                                      std::back_inserter(diff));
        Segment pq(p, q);
        bool witnessed = false;
        for (std::size_t e = 0; e < cover.edges.size() && !witnessed; ++e) {
            if (segment_intersection(pq, cover.edge_geom(static_cast<int>(e))).kind ==
                SegmentIntersection::Empty)
                continue;
            for (int c : cover.edges[e].colors)
                if (std::binary_search(diff.begin(), diff.end(), c)) {
                    witnessed = true;
                    break;
                }
        }
        CHECK(witnessed);
    }
}
