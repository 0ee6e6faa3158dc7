#include "viscount/scene.h"

#include "viscount/errors.h"
#include "viscount/rng.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace viscount {

int Scene::segment_containing(const Point& p) const {
    for (int i = 0; i < size(); ++i)
        if (point_on_segment(p, seg(i))) return i;
    return -1;
}

GeneralPositionReport validate(const Scene& scene) {
    if (scene.size() < 1) throw Error("scene must contain at least one segment");
    if (!(scene.bbox.lo.x < scene.bbox.hi.x) || !(scene.bbox.lo.y < scene.bbox.hi.y))
        throw Error("bounding box is empty");

    for (int i = 0; i < scene.size(); ++i) {
        const Segment& s = scene.seg(i);
        if (s.a == s.b) throw DegenerateSegment(i);
        if (!scene.bbox.contains_open(s.a) || !scene.bbox.contains_open(s.b))
            throw OutOfBounds("segment " + std::to_string(i) +
                              " touches or leaves the bounding box");
    }
    for (int i = 0; i < scene.size(); ++i)
        for (int j = i + 1; j < scene.size(); ++j)
            if (segment_intersection(scene.seg(i), scene.seg(j)).kind !=
                SegmentIntersection::Empty)
                throw DisjointnessViolation(i, j);

    GeneralPositionReport report;
    int ne = scene.endpoint_count();
    for (int i = 0; i < ne; ++i)
        for (int j = i + 1; j < ne; ++j) {
            if (scene.endpoint(i).x == scene.endpoint(j).x)
                report.shared_x_pairs.push_back({i, j});
            for (int k = j + 1; k < ne; ++k)
                if (orient_sign(scene.endpoint(i), scene.endpoint(j), scene.endpoint(k)) == 0)
                    report.collinear_endpoint_triples.push_back({i, j, k});
        }
    for (int e = 0; e < ne; ++e) {
        int own = e / 2;
        for (int s = 0; s < scene.size(); ++s) {
            if (s == own) continue;
            if (orient_sign(scene.seg(s).a, scene.seg(s).b, scene.endpoint(e)) == 0)
                report.endpoint_on_segment_line.push_back({e, s});
        }
    }
    return report;
}

namespace {

Rat seg_dist2(const Segment& s, const Segment& t) {
    return std::min(std::min(dist2_point_segment(s.a, t), dist2_point_segment(s.b, t)),
                    std::min(dist2_point_segment(t.a, s), dist2_point_segment(t.b, s)));
}

} // namespace

Scene generate_random(int n, const Box& bbox, std::uint64_t seed, const GenerateOptions& opt) {
    if (n < 1) throw ConfigError("n must be at least 1");
    if (sign(opt.min_separation) <= 0) throw ConfigError("min_separation must be positive");

    Rat max_len = opt.max_len;
    if (sign(max_len) == 0) max_len = (bbox.width() + bbox.height()) / 8;
    Rat min_sep2 = opt.min_separation * opt.min_separation;
    Rat max_len2 = max_len * max_len;

    const std::uint64_t grid = 1ULL << opt.lattice_bits;
    Rat sx = bbox.width() / static_cast<unsigned long>(grid);
    Rat sy = bbox.height() / static_cast<unsigned long>(grid);

    Rng rng(seed);
    auto lattice_point = [&]() {
        // Strictly inside: grid indices in [1, grid-1].
        std::uint64_t ix = 1 + rng.next_below(grid - 1);
        std::uint64_t iy = 1 + rng.next_below(grid - 1);
        return Point(bbox.lo.x + sx * static_cast<unsigned long>(ix),
                     bbox.lo.y + sy * static_cast<unsigned long>(iy));
    };

    Scene scene;
    scene.bbox = bbox;
    std::vector<Point> endpoints;

    long budget = static_cast<long>(opt.attempts_per_segment) * n;
    while (scene.size() < n) {
        if (--budget < 0)
            throw GenerationExhausted(
                "could not place " + std::to_string(n) + " segments (placed " +
                std::to_string(scene.size()) + "); box too tight for min_separation");

        Point a = lattice_point();
        Point b = lattice_point();
        if (a == b) continue;
        Segment cand(a, b);
        if (dist2(a, b) > max_len2) continue;

        // Keep a margin to the box so regions near segments stay roomy.
        bool ok = true;
        for (const Point* p : {&a, &b}) {
            if (p->x - bbox.lo.x < opt.min_separation || bbox.hi.x - p->x < opt.min_separation ||
                p->y - bbox.lo.y < opt.min_separation || bbox.hi.y - p->y < opt.min_separation) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        for (const Segment& s : scene.segments) {
            // Endpoint distances say nothing about proper crossings.
            if (segment_intersection(cand, s).kind != SegmentIntersection::Empty ||
                seg_dist2(cand, s) < min_sep2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // Degeneracy screens against the accepted set: shared x-coordinates
        // and collinear endpoint triples involving the new endpoints.
        for (const Point& q : endpoints)
            if (q.x == a.x || q.x == b.x) { ok = false; break; }
        if (ok && a.x == b.x) ok = false;

        // (c, i, j) collinear iff two old endpoints share a direction through
        // c after folding opposite rays together; sort-and-scan keeps this
        // O(k log k) per candidate.
        auto makes_collinear_triple = [&](const Point& c) {
            std::vector<Point> dirs;
            dirs.reserve(endpoints.size());
            for (const Point& q : endpoints) {
                Rat dx = q.x - c.x, dy = q.y - c.y;
                if (sign(dy) < 0 || (sign(dy) == 0 && sign(dx) < 0)) { dx = -dx; dy = -dy; }
                dirs.emplace_back(std::move(dx), std::move(dy));
            }
            std::sort(dirs.begin(), dirs.end(), [](const Point& u, const Point& v) {
                return sign(cross2(u.x, u.y, v.x, v.y)) > 0;
            });
            for (std::size_t i = 0; i + 1 < dirs.size(); ++i)
                if (sign(cross2(dirs[i].x, dirs[i].y, dirs[i + 1].x, dirs[i + 1].y)) == 0)
                    return true;
            return false;
        };
        if (ok)
            for (const Point& q : endpoints)
                if (orient_sign(a, b, q) == 0) { ok = false; break; }
        if (ok && (makes_collinear_triple(a) || makes_collinear_triple(b))) ok = false;
        if (!ok) continue;

        scene.segments.push_back(cand);
        endpoints.push_back(a);
        endpoints.push_back(b);
    }
    return scene;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream iss(line);
    std::string t;
    while (iss >> t) toks.push_back(t);
    return toks;
}

Rat parse_coord(const std::string& tok, int line, int col) {
    try {
        return rat_from_string(tok);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad coordinate '") + tok + "': " + e.what(), line, col);
    }
}

} // namespace

Scene load_scene(std::istream& in) {
    Scene scene;
    bool have_bbox = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string::size_type hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;
        if (!have_bbox) {
            if (toks.size() != 5 || toks[0] != "bbox")
                throw ParseError("expected 'bbox x0 y0 x1 y1'", lineno, 1);
            scene.bbox.lo = Point(parse_coord(toks[1], lineno, 2), parse_coord(toks[2], lineno, 3));
            scene.bbox.hi = Point(parse_coord(toks[3], lineno, 4), parse_coord(toks[4], lineno, 5));
            have_bbox = true;
            continue;
        }
        if (toks.size() != 4)
            throw ParseError("expected 'x1 y1 x2 y2'", lineno, 1);
        scene.segments.emplace_back(
            Point(parse_coord(toks[0], lineno, 1), parse_coord(toks[1], lineno, 2)),
            Point(parse_coord(toks[2], lineno, 3), parse_coord(toks[3], lineno, 4)));
    }
    if (!have_bbox) throw ParseError("missing bbox line", lineno, 1);
    validate(scene);
    return scene;
}

Scene load_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene file: " + path);
    return load_scene(in);
}

void save_scene(const Scene& scene, std::ostream& out) {
    out << "bbox " << rat_to_decimal(scene.bbox.lo.x) << ' ' << rat_to_decimal(scene.bbox.lo.y)
        << ' ' << rat_to_decimal(scene.bbox.hi.x) << ' ' << rat_to_decimal(scene.bbox.hi.y)
        << '\n';
    for (const Segment& s : scene.segments)
        out << rat_to_decimal(s.a.x) << ' ' << rat_to_decimal(s.a.y) << ' '
            << rat_to_decimal(s.b.x) << ' ' << rat_to_decimal(s.b.y) << '\n';
}

void save_scene_file(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    save_scene(scene, out);
}

} // namespace viscount
