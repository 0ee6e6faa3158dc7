#include "viscount/index_io.h"

#include "viscount/errors.h"

#include <fstream>
#include <sstream>

namespace viscount {

namespace {
constexpr const char* kMagic = "viscount-index";
constexpr int kVersion = 1;
} // namespace

void save_index(const VisibilityIndex& index, std::ostream& out) {
    out << kMagic << ' ' << kVersion << '\n';
    out << "alpha " << rat_to_string(index.config.alpha) << '\n';
    out << "seed " << index.seed << '\n';
    out << "config " << index.config.crossing_bound_constant << ' '
        << index.config.cell_bound_constant << ' ' << index.config.max_retries << ' '
        << index.config.audit_every << '\n';
    out << "evg-m " << index.evg_m << '\n';
    out << "e-count " << index.cover.edges.size() << '\n';
    out << "r " << index.cutting.r << '\n';
    out << "retries " << index.cutting.retry_count << '\n';
    out << "cells " << index.cells.size() << '\n';
    out << "scene-begin\n";
    save_scene(index.scene, out);
    out << "scene-end\n";
    out << "sample";
    for (int id : index.cutting.sample_edge_ids) out << ' ' << id;
    out << '\n';
    for (std::size_t i = 0; i < index.cells.size(); ++i) {
        const IndexCell& c = index.cells[i];
        out << "cell " << i << ' ' << rat_to_string(c.rep.x) << ' ' << rat_to_string(c.rep.y)
            << ' ' << c.count << '\n';
    }
    out << "end\n";
}

void save_index_file(const VisibilityIndex& index, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open index file for writing: " + path);
    save_index(index, out);
}

VisibilityIndex load_index(std::istream& in) {
    auto next_line = [&](const std::string& expect_key) {
        std::string line;
        if (!std::getline(in, line))
            throw IndexFormatError("unexpected end of index file (wanted " + expect_key + ")");
        if (line.rfind(expect_key, 0) != 0)
            throw IndexFormatError("expected '" + expect_key + "', got '" + line + "'");
        return line;
    };

    std::string header = next_line(kMagic);
    {
        std::istringstream hs(header);
        std::string magic;
        int version = 0;
        hs >> magic >> version;
        if (version != kVersion)
            throw IndexFormatError("unsupported index version " + std::to_string(version));
    }

    CuttingConfig cfg;
    std::uint64_t seed = 0;
    {
        std::istringstream ls(next_line("alpha"));
        std::string key, val;
        ls >> key >> val;
        cfg.alpha = rat_from_string(val);
    }
    {
        std::istringstream ls(next_line("seed"));
        std::string key;
        ls >> key >> seed;
    }
    {
        std::istringstream ls(next_line("config"));
        std::string key;
        ls >> key >> cfg.crossing_bound_constant >> cfg.cell_bound_constant >> cfg.max_retries >>
            cfg.audit_every;
    }
    long evg_m = 0, e_count = 0, r = 0, retries = 0, cells = 0;
    auto read_long = [&](const char* key) {
        std::istringstream ls(next_line(key));
        std::string k;
        long v = 0;
        ls >> k >> v;
        return v;
    };
    evg_m = read_long("evg-m");
    e_count = read_long("e-count");
    r = read_long("r");
    retries = read_long("retries");
    cells = read_long("cells");

    next_line("scene-begin");
    std::ostringstream scene_text;
    std::string line;
    for (;;) {
        if (!std::getline(in, line)) throw IndexFormatError("scene block not terminated");
        if (line == "scene-end") break;
        scene_text << line << '\n';
    }
    std::istringstream scene_in(scene_text.str());
    Scene scene = load_scene(scene_in); // re-validates the scene invariants

    std::vector<int> sample;
    {
        std::istringstream ls(next_line("sample"));
        std::string key;
        ls >> key;
        int id;
        while (ls >> id) sample.push_back(id);
    }

    struct StoredCell {
        Point rep;
        int count;
    };
    std::vector<StoredCell> stored;
    stored.reserve(static_cast<std::size_t>(cells));
    for (long i = 0; i < cells; ++i) {
        std::istringstream ls(next_line("cell"));
        std::string key, rx, ry;
        long id = 0;
        int count = 0;
        ls >> key >> id >> rx >> ry >> count;
        if (id != i) throw IndexFormatError("cell records out of order");
        stored.push_back({Point(rat_from_string(rx), rat_from_string(ry)), count});
    }
    next_line("end");

    // Deterministic rebuild, then verify the stored structure against it.
    VisibilityIndex index = build_visibility_index(scene, cfg, seed);
    if (index.evg_m != evg_m || static_cast<long>(index.cover.edges.size()) != e_count ||
        index.cutting.r != r || index.cutting.retry_count != retries ||
        static_cast<long>(index.cells.size()) != cells)
        throw IndexFormatError("index digests do not match the rebuilt structure");
    if (index.cutting.sample_edge_ids != sample)
        throw IndexFormatError("sampled edge ids do not match the rebuilt structure");
    for (std::size_t i = 0; i < index.cells.size(); ++i) {
        if (index.cells[i].rep != stored[i].rep || index.cells[i].count != stored[i].count)
            throw IndexFormatError("cell " + std::to_string(i) +
                                   " does not match the rebuilt structure");
    }
    return index;
}

VisibilityIndex load_index_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open index file: " + path);
    return load_index(in);
}

} // namespace viscount
