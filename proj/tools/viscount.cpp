// Command-line surface: scene generation and validation, index building with
// persistence, exact queries, and a benchmark harness comparing the four
// answerers (oracle, arrangement baseline, cutting index, visible-endpoint
// approximation).

#include "CLI11.hpp"
#include "json.hpp"

#include "viscount/arrangement.h"
#include "viscount/counters.h"
#include "viscount/cover.h"
#include "viscount/cutting.h"
#include "viscount/errors.h"
#include "viscount/evg.h"
#include "viscount/index_io.h"
#include "viscount/rng.h"
#include "viscount/scene.h"
#include "viscount/visibility.h"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace viscount;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitExactness = 3;
constexpr int kExitBuild = 4;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

Point parse_point(const std::string& text) {
    std::string::size_type comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("point must be 'x,y', got '" + text + "'");
    return Point(rat_from_string(text.substr(0, comma)),
                 rat_from_string(text.substr(comma + 1)));
}

json report_json(const GeneralPositionReport& rep) {
    json j;
    j["clean"] = rep.clean();
    j["collinear_endpoint_triples"] = json::array();
    for (const auto& t : rep.collinear_endpoint_triples)
        j["collinear_endpoint_triples"].push_back({t[0], t[1], t[2]});
    j["shared_x_pairs"] = json::array();
    for (const auto& p : rep.shared_x_pairs) j["shared_x_pairs"].push_back({p[0], p[1]});
    j["endpoint_on_segment_line"] = json::array();
    for (const auto& p : rep.endpoint_on_segment_line)
        j["endpoint_on_segment_line"].push_back({p[0], p[1]});
    return j;
}

Point random_general_point(Rng& rng, const Scene& scene) {
    for (;;) {
        Rat fx = rat_from_dyadic(rng.next() >> 24, 40);
        Rat fy = rat_from_dyadic(rng.next() >> 24, 40);
        Point p(scene.bbox.lo.x + fx * scene.bbox.width(),
                scene.bbox.lo.y + fy * scene.bbox.height());
        if (!scene.bbox.contains_open(p)) continue;
        if (scene.segment_containing(p) >= 0) continue;
        return p;
    }
}

struct GenArgs {
    int n = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> bbox = {"0", "0", "4096", "4096"};
    std::string min_sep = "64";
    std::string max_len = "0";
    int lattice_bits = 12;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    Box box{Point(rat_from_string(a.bbox[0]), rat_from_string(a.bbox[1])),
            Point(rat_from_string(a.bbox[2]), rat_from_string(a.bbox[3]))};
    GenerateOptions opt;
    opt.min_separation = rat_from_string(a.min_sep);
    opt.max_len = rat_from_string(a.max_len);
    opt.lattice_bits = a.lattice_bits;
    Scene scene = generate_random(a.n, box, a.seed, opt);
    save_scene_file(scene, a.out);
    std::cout << "wrote " << a.out << ": n=" << scene.size() << " seed=" << a.seed << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& path, bool as_json) {
    Scene scene = load_scene_file(path); // throws on hard violations
    GeneralPositionReport rep = validate(scene);
    if (as_json) {
        json j = report_json(rep);
        j["n"] = scene.size();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << path << ": n=" << scene.size() << ", "
                  << (rep.clean() ? "clean" : "degeneracies flagged") << "\n";
        if (!rep.clean())
            std::cout << "  collinear endpoint triples: " << rep.collinear_endpoint_triples.size()
                      << "\n  shared-x endpoint pairs: " << rep.shared_x_pairs.size()
                      << "\n  endpoints on other segment lines: "
                      << rep.endpoint_on_segment_line.size() << "\n";
    }
    return kExitOk;
}

struct PipelineTimings {
    double evg = 0, arrangement = 0, labels = 0, cover = 0, cutting = 0, index = 0;
};

struct Pipeline {
    Scene scene;
    Evg evg;
    std::vector<CriticalEdge> critical;
    TrapArrangement arr;
    FaceLabels labels;
    Cover cover;
    PipelineTimings timings;
};

Pipeline build_pipeline(Scene scene, std::uint64_t seed, LabelMode mode) {
    Pipeline p;
    p.scene = std::move(scene);
    auto t0 = Clock::now();
    p.evg = build_evg(p.scene);
    auto t1 = Clock::now();
    p.critical = critical_edge_set(p.evg, p.scene);
    p.arr = build_trap_map(p.critical, p.scene, seed);
    auto t2 = Clock::now();
    p.labels = label_faces(p.arr, p.scene, mode, 50);
    auto t3 = Clock::now();
    p.cover = build_cover(p.arr, p.labels);
    auto t4 = Clock::now();
    p.timings.evg = ms_between(t0, t1);
    p.timings.arrangement = ms_between(t1, t2);
    p.timings.labels = ms_between(t2, t3);
    p.timings.cover = ms_between(t3, t4);
    return p;
}

json stats_json(const Pipeline& p, const Cutting* cut, const std::vector<IndexCell>* cells,
                const CuttingConfig* cfg, std::uint64_t seed, bool with_timing) {
    json j;
    j["scene"]["n"] = p.scene.size();
    j["seed"] = seed;
    j["evg"]["m"] = p.evg.m;
    j["evg"]["vg_edges"] = p.evg.vg_pairs.size();
    j["evg"]["incidence"] = p.evg.incidence;
    j["critical_edges"] = p.critical.size();
    ArrangementStats ast = arrangement_stats(p.arr, p.labels);
    j["arrangement"]["trapezoids"] = ast.trapezoids;
    j["arrangement"]["slivers"] = ast.slivers;
    j["arrangement"]["crossings"] = ast.crossings;
    json hist = json::array();
    for (auto [m, count] : ast.label_histogram) hist.push_back({{"m", m}, {"faces", count}});
    j["arrangement"]["label_histogram"] = hist;
    j["cover"]["triangles"] = p.cover.triangles.size();
    j["cover"]["edges"] = p.cover.edges.size();
    json per_color = json::array();
    for (const auto& v : p.cover.by_color) per_color.push_back(v.size());
    j["cover"]["per_color_triangles"] = per_color;
    j["cover"]["evg_m_for_comparison"] = p.evg.m;
    if (cut && cfg) {
        j["cutting"]["alpha"] = rat_to_string(cfg->alpha);
        j["cutting"]["r"] = cut->r;
        j["cutting"]["cells"] = cut->cells.size();
        j["cutting"]["retry_count"] = cut->retry_count;
        j["cutting"]["max_crossing"] = cut->max_crossing;
        j["cutting"]["crossing_bound"] = cut->crossing_bound;
        // Histogram of crossing-list lengths in powers of two.
        std::map<long, long> buckets;
        for (const auto& list : cut->crossing) {
            long b = 1;
            while (b < static_cast<long>(list.size())) b *= 2;
            ++buckets[b];
        }
        json cells_hist = json::array();
        for (auto [b, c] : buckets) cells_hist.push_back({{"list_len_le", b}, {"cells", c}});
        j["cutting"]["crossing_histogram"] = cells_hist;
    }
    if (cells) j["index"]["cells"] = cells->size();
    if (with_timing) {
        j["timings_ms"]["evg"] = p.timings.evg;
        j["timings_ms"]["arrangement"] = p.timings.arrangement;
        j["timings_ms"]["labels"] = p.timings.labels;
        j["timings_ms"]["cover"] = p.timings.cover;
        j["timings_ms"]["cutting"] = p.timings.cutting;
        j["timings_ms"]["index"] = p.timings.index;
    }
    return j;
}

struct BuildArgs {
    std::string scene_path;
    std::string alpha = "0.5";
    std::uint64_t seed = 1;
    std::string out;
    std::string stats_path;
    std::string dump_evg_path;
    bool oracle_labels = false;
    bool no_timing = false;
};

int cmd_build(const BuildArgs& a) {
    Scene scene = load_scene_file(a.scene_path);
    CuttingConfig cfg;
    cfg.alpha = rat_from_string(a.alpha);
    if (sign(cfg.alpha) <= 0 || cfg.alpha >= 1)
        throw ConfigError("alpha must lie strictly between 0 and 1");

    Pipeline p = build_pipeline(scene, a.seed,
                                a.oracle_labels ? LabelMode::OracleDirect : LabelMode::BfsCorrected);
    auto t0 = Clock::now();
    Cutting cut = build_cutting(p.cover, p.scene, cfg, a.seed);
    auto t1 = Clock::now();
    std::vector<IndexCell> cells = build_index(p.scene, p.cover, cut, cfg, a.seed);
    auto t2 = Clock::now();
    p.timings.cutting = ms_between(t0, t1);
    p.timings.index = ms_between(t1, t2);

    if (!a.dump_evg_path.empty()) {
        std::ofstream out(a.dump_evg_path);
        if (!out) throw Error("cannot open " + a.dump_evg_path);
        dump_evg(p.evg, p.scene, out);
    }

    json stats = stats_json(p, &cut, &cells, &cfg, a.seed, !a.no_timing);

    VisibilityIndex index;
    index.scene = std::move(p.scene);
    index.cover = std::move(p.cover);
    index.cutting = std::move(cut);
    index.cells = std::move(cells);
    index.config = cfg;
    index.seed = a.seed;
    index.evg_m = p.evg.m;
    save_index_file(index, a.out);

    if (!a.stats_path.empty()) {
        std::ofstream out(a.stats_path);
        if (!out) throw Error("cannot open " + a.stats_path);
        out << stats.dump(2) << "\n";
    }
    std::cout << stats.dump(2) << "\n";
    return kExitOk;
}

struct QueryArgs {
    std::string index_path;
    std::vector<std::string> points;
    bool check = false;
    std::string format = "json";
};

int cmd_query(const QueryArgs& a) {
    VisibilityIndex index = load_index_file(a.index_path);
    bool mismatch = false;
    for (const std::string& text : a.points) {
        Point p = parse_point(text);
        json j;
        j["point"] = {rat_to_string(p.x), rat_to_string(p.y)};
        try {
            QueryResult r = query(index, p);
            j["m_p"] = r.m_p;
            j["cell"] = r.cell;
            j["candidate_edges_scanned"] = r.candidate_edges_scanned;
            j["colors_tested"] = r.colors_tested;
            j["corrections"] = r.corrections;
            j["used_fallback"] = r.used_fallback;
            if (a.check) {
                int truth = visible_count_oracle(p, index.scene).m_p;
                j["oracle_m_p"] = truth;
                if (truth != r.m_p) {
                    j["exactness_violation"] = true;
                    mismatch = true;
                }
            }
        } catch (const OutOfBounds& e) {
            j["error"] = e.what();
        }
        if (a.format == "jsonl") std::cout << j.dump() << "\n";
        else std::cout << j.dump(2) << "\n";
    }
    return mismatch ? kExitExactness : kExitOk;
}

struct BenchArgs {
    std::vector<std::string> scene_files;
    std::string n_list;
    std::string alphas = "0.25,0.5,0.75";
    int queries = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    bool no_timing = false;
    std::string min_sep = "64";
    std::string max_len = "0";
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int cmd_bench(const BenchArgs& a) {
    std::vector<std::pair<std::string, Scene>> scenes;
    for (const std::string& f : a.scene_files) scenes.emplace_back(f, load_scene_file(f));
    if (!a.n_list.empty()) {
        Box box{Point(0, 0), Point(4096, 4096)};
        GenerateOptions opt;
        opt.min_separation = rat_from_string(a.min_sep);
        opt.max_len = rat_from_string(a.max_len);
        int i = 0;
        for (const std::string& ntext : split_list(a.n_list)) {
            int n = std::stoi(ntext);
            std::uint64_t seed = a.seed + static_cast<std::uint64_t>(1000 + i++);
            scenes.emplace_back("gen-n" + ntext + "-s" + std::to_string(seed),
                                generate_random(n, box, seed, opt));
        }
    }
    if (scenes.empty()) throw ConfigError("bench needs --scene files or --n list");

    std::vector<Rat> alphas;
    for (const std::string& s : split_list(a.alphas)) alphas.push_back(rat_from_string(s));

    std::ofstream out;
    std::ostream* os = &std::cout;
    if (!a.out.empty()) {
        out.open(a.out);
        if (!out) throw Error("cannot open " + a.out);
        os = &out;
    }
    bool csv = a.format == "csv";
    // Echo the effective configuration into the artifact itself.
    *os << "# viscount bench seed=" << a.seed << " alphas=" << a.alphas << " queries="
        << a.queries << " min_sep=" << a.min_sep << " max_len=" << a.max_len
        << (a.no_timing ? " no_timing" : "") << "\n";
    if (csv)
        *os << "scene,n,m_evg,vts,e_count,alpha,r,cells,retries,build_ms,query,qx,qy,"
               "oracle,baseline,cutting,ve_p,candidates,colors,corrections,fallback,"
               "oracle_us,cutting_us\n";

    long violations = 0;
    long ve_left_violations = 0;
    double ve_ratio_sum = 0;
    long ve_ratio_count = 0;
    json summary_trend = json::array();

    for (auto& [name, scene] : scenes) {
        Pipeline p = build_pipeline(scene, a.seed, LabelMode::BfsCorrected);
        for (const Rat& alpha : alphas) {
            CuttingConfig cfg;
            cfg.alpha = alpha;
            auto t0 = Clock::now();
            Cutting cut = build_cutting(p.cover, p.scene, cfg, a.seed);
            std::vector<IndexCell> cells = build_index(p.scene, p.cover, cut, cfg, a.seed);
            auto t1 = Clock::now();
            double build_ms = a.no_timing ? 0.0 : ms_between(t0, t1);

            Rng rng(a.seed * 77 + static_cast<std::uint64_t>(p.scene.size()));
            double mean_candidates = 0;
            for (int q = 0; q < a.queries; ++q) {
                Point pt = random_general_point(rng, p.scene);
                auto o0 = Clock::now();
                CountResult oracle = visible_count_oracle(pt, p.scene);
                auto o1 = Clock::now();
                BaselineResult base = baseline_query(p.arr, p.labels, p.scene, pt);
                QueryResult cutres = query_components(p.scene, p.cover, cut, cells, pt);
                auto o2 = Clock::now();
                int ve = visible_endpoint_count(pt, p.scene);

                if (base.count.m_p != oracle.m_p || cutres.m_p != oracle.m_p) ++violations;
                if (ve > 2 * oracle.m_p) ++violations; // structural bound, must hold
                if (oracle.m_p > ve) ++ve_left_violations;
                if (oracle.m_p > 0) {
                    ve_ratio_sum += static_cast<double>(ve) / oracle.m_p;
                    ++ve_ratio_count;
                }
                mean_candidates += static_cast<double>(cutres.candidate_edges_scanned);

                double oracle_us = a.no_timing ? 0.0 : ms_between(o0, o1) * 1000.0;
                double cutting_us = a.no_timing ? 0.0 : ms_between(o1, o2) * 1000.0;
                if (csv) {
                    *os << name << ',' << p.scene.size() << ',' << p.evg.m << ','
                        << p.cover.triangles.size() << ',' << p.cover.edges.size() << ','
                        << rat_to_string(alpha) << ',' << cut.r << ',' << cut.cells.size() << ','
                        << cut.retry_count << ',' << build_ms << ',' << q << ','
                        << rat_to_string(pt.x) << ',' << rat_to_string(pt.y) << ',' << oracle.m_p
                        << ',' << base.count.m_p << ',' << cutres.m_p << ',' << ve << ','
                        << cutres.candidate_edges_scanned << ',' << cutres.colors_tested << ','
                        << cutres.corrections << ',' << (cutres.used_fallback ? 1 : 0) << ','
                        << oracle_us << ',' << cutting_us << "\n";
                } else {
                    json rec;
                    rec["scene"] = name;
                    rec["n"] = p.scene.size();
                    rec["alpha"] = rat_to_string(alpha);
                    rec["q"] = {rat_to_string(pt.x), rat_to_string(pt.y)};
                    rec["oracle"] = oracle.m_p;
                    rec["baseline"] = base.count.m_p;
                    rec["cutting"] = cutres.m_p;
                    rec["ve_p"] = ve;
                    rec["candidates"] = cutres.candidate_edges_scanned;
                    rec["build_ms"] = build_ms;
                    *os << rec.dump() << "\n";
                }
            }
            summary_trend.push_back({{"scene", name},
                                     {"alpha", rat_to_string(alpha)},
                                     {"r", cut.r},
                                     {"cells", cut.cells.size()},
                                     {"mean_candidates",
                                      a.queries > 0 ? mean_candidates / a.queries : 0.0}});
        }
    }

    json summary;
    summary["seed"] = a.seed;
    summary["exactness_violations"] = violations;
    summary["ve_left_violations_logged"] = ve_left_violations;
    summary["mean_ve_over_m_ratio"] =
        ve_ratio_count > 0 ? ve_ratio_sum / static_cast<double>(ve_ratio_count) : 0.0;
    summary["trend"] = summary_trend;
    std::cerr << summary.dump(2) << "\n";
    return violations == 0 ? kExitOk : kExitExactness;
}

struct CompareArgs {
    std::string scene_path;
    std::string alpha = "0.5";
    int queries = 20;
    std::uint64_t seed = 1;
};

int cmd_compare(const CompareArgs& a) {
    Scene scene = load_scene_file(a.scene_path);
    CuttingConfig cfg;
    cfg.alpha = rat_from_string(a.alpha);
    Pipeline p = build_pipeline(scene, a.seed, LabelMode::BfsCorrected);
    Cutting cut = build_cutting(p.cover, p.scene, cfg, a.seed);
    std::vector<IndexCell> cells = build_index(p.scene, p.cover, cut, cfg, a.seed);

    Rng rng(a.seed + 99);
    std::cout << "point, oracle, baseline, cutting, ve_p\n";
    long violations = 0;
    for (int q = 0; q < a.queries; ++q) {
        Point pt = random_general_point(rng, p.scene);
        CountResult oracle = visible_count_oracle(pt, p.scene);
        BaselineResult base = baseline_query(p.arr, p.labels, p.scene, pt);
        QueryResult cutres = query_components(p.scene, p.cover, cut, cells, pt);
        int ve = visible_endpoint_count(pt, p.scene);
        if (base.count.m_p != oracle.m_p || cutres.m_p != oracle.m_p) ++violations;
        std::cout << "(" << rat_to_string(pt.x) << " " << rat_to_string(pt.y) << "), "
                  << oracle.m_p << ", " << base.count.m_p << ", " << cutres.m_p << ", " << ve
                  << "\n";
    }
    std::cout << (violations == 0 ? "all exact answerers agree\n"
                                  : "EXACTNESS VIOLATIONS: " + std::to_string(violations) + "\n");
    return violations == 0 ? kExitOk : kExitExactness;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact visibility counting over disjoint planar segments"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* sub_gen = app.add_subcommand("gen", "generate a random scene");
    sub_gen->add_option("--n", gen.n, "number of segments");
    sub_gen->add_option("--seed", gen.seed, "generator seed");
    sub_gen->add_option("--bbox", gen.bbox, "x0 y0 x1 y1")->expected(4);
    sub_gen->add_option("--min-sep", gen.min_sep, "minimum segment separation");
    sub_gen->add_option("--max-len", gen.max_len, "maximum segment length (0 = auto)");
    sub_gen->add_option("--lattice-bits", gen.lattice_bits, "endpoint lattice resolution");
    sub_gen->add_option("--out", gen.out, "output scene file")->required();

    std::string validate_path;
    bool validate_json = false;
    CLI::App* sub_val = app.add_subcommand("validate", "validate a scene file");
    sub_val->add_option("scene", validate_path, "scene file")->required();
    sub_val->add_flag("--json", validate_json, "machine-readable report");

    BuildArgs build;
    CLI::App* sub_build = app.add_subcommand("build", "build and persist a cutting index");
    sub_build->add_option("scene", build.scene_path, "scene file")->required();
    sub_build->add_option("--alpha", build.alpha, "tradeoff parameter in (0,1)");
    sub_build->add_option("--seed", build.seed, "master seed");
    sub_build->add_option("--out", build.out, "index output file")->required();
    sub_build->add_option("--stats", build.stats_path, "write the stats report here too");
    sub_build->add_option("--dump-evg", build.dump_evg_path, "debug dump of the EVG");
    sub_build->add_flag("--oracle-labels", build.oracle_labels,
                        "label faces by direct oracle evaluation (slow)");
    sub_build->add_flag("--no-timing", build.no_timing,
                        "omit wall-clock fields for byte-stable reports");

    QueryArgs query_args;
    CLI::App* sub_query = app.add_subcommand("query", "answer queries from a persisted index");
    sub_query->add_option("index", query_args.index_path, "index file")->required();
    sub_query->add_option("points", query_args.points, "query points as x,y")->required();
    sub_query->add_flag("--check", query_args.check, "verify each answer against the oracle");
    sub_query->add_option("--format", query_args.format, "json or jsonl");

    BenchArgs bench;
    CLI::App* sub_bench = app.add_subcommand("bench", "cross-answerer benchmark harness");
    sub_bench->add_option("--scene", bench.scene_files, "scene file (repeatable)");
    sub_bench->add_option("--n", bench.n_list, "generate scenes of these sizes, e.g. 5,10,20");
    sub_bench->add_option("--alphas", bench.alphas, "comma-separated alphas");
    sub_bench->add_option("--queries", bench.queries, "queries per scene and alpha");
    sub_bench->add_option("--seed", bench.seed, "master seed");
    sub_bench->add_option("--out", bench.out, "records file (default stdout)");
    sub_bench->add_option("--format", bench.format, "csv or jsonl");
    sub_bench->add_option("--min-sep", bench.min_sep, "generator separation");
    sub_bench->add_option("--max-len", bench.max_len, "generator max length (0 = auto)");
    sub_bench->add_flag("--no-timing", bench.no_timing, "zero wall-clock fields");

    CompareArgs compare;
    CLI::App* sub_cmp = app.add_subcommand("compare", "side-by-side answers on one scene");
    sub_cmp->add_option("scene", compare.scene_path, "scene file")->required();
    sub_cmp->add_option("--alpha", compare.alpha, "tradeoff parameter");
    sub_cmp->add_option("--queries", compare.queries, "number of random queries");
    sub_cmp->add_option("--seed", compare.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sub_gen->parsed()) return cmd_gen(gen);
        if (sub_val->parsed()) return cmd_validate(validate_path, validate_json);
        if (sub_build->parsed()) return cmd_build(build);
        if (sub_query->parsed()) return cmd_query(query_args);
        if (sub_bench->parsed()) return cmd_bench(bench);
        if (sub_cmp->parsed()) return cmd_compare(compare);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DisjointnessViolation& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const OutOfBounds& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DegenerateSegment& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const GenerationExhausted& e) {
        std::cerr << "generation failed: " << e.what() << "\n";
        return kExitBuild;
    } catch (const Error& e) {
        std::cerr << "build error: " << e.what() << "\n";
        return kExitBuild;
    }
    return kExitUsage;
}
