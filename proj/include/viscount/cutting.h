#ifndef VISCOUNT_CUTTING_H
#define VISCOUNT_CUTTING_H

#include "viscount/cover.h"

#include <cstdint>
#include <memory>

namespace viscount {

struct CuttingConfig {
    Rat alpha = Rat(1, 2);              // space/query tradeoff, in (0,1)
    double crossing_bound_constant = 4; // max list <= c * (|E|/r) * ln r
    double cell_bound_constant = 8;     // cells <= c * r^2
    int max_retries = 16;
    int audit_every = 50; // index build: oracle check every k-th cell
};

/// A (1/r)-cutting over the cover edge set, built from a random sample by way
/// of the trapezoidal decomposition; cells are the triangles of the split
/// trapezoids, clipped to the box by construction.
struct Cutting {
    Rat alpha;
    int r = 0;
    std::vector<int> sample_edge_ids; // into cover.edges
    std::unique_ptr<TrapMap> trapmap; // over the merged sampled edges
    std::vector<Triangle> cells;
    std::vector<int> cell_trap;                  // owning trapezoid per cell
    std::vector<std::array<int, 2>> trap_cells;  // up to two cells per trapezoid
    std::vector<std::vector<int>> crossing;      // cover-edge ids meeting each cell interior
    std::vector<std::vector<int>> boundary_edges; // cover-edge ids along each cell boundary
    std::vector<std::vector<int>> adjacency;     // cell connectivity graph
    int retry_count = 0;
    long max_crossing = 0;
    double crossing_bound = 0;

    /// Cell containing p; throws OnBoundary when p lies on the skeleton.
    int locate_cell(const Point& p) const;

    /// Cells whose closure may touch s (superset via the search DAG).
    std::vector<int> cells_touching(const Segment& s) const;
};

Cutting build_cutting(const Cover& cover, const Scene& scene, const CuttingConfig& cfg,
                      std::uint64_t seed);

/// Representative point and exact count per cell.
struct IndexCell {
    Point rep;
    int count = 0;
};

struct QueryResult {
    int m_p = 0;
    int cell = -1;
    long candidate_edges_scanned = 0;
    int colors_tested = 0;
    int corrections = 0; // net signed adjustment
    bool used_fallback = false;
};

struct WalkStats {
    long candidate_edges_scanned = 0;
    int colors_tested = 0;
    int corrections = 0;
};

/// Counts visible segments at q2 given the exact count at q1, by re-testing
/// only the colors whose cover edges cross the closed segment [q1, q2].
/// Throws DegeneratePath (as OnBoundary) when an endpoint lies on a cover
/// edge. Both points must be off obstacles and cell boundaries.
int correction_walk(const Point& q1, int count_at_q1, const Point& q2, const Scene& scene,
                    const Cover& cover, const Cutting& cutting, WalkStats* stats = nullptr);

/// Breadth-first preprocessing over cell adjacency: one oracle evaluation at
/// the root, corrections everywhere else, an oracle audit every
/// `cfg.audit_every`-th cell (VerificationMismatch on disagreement).
/// Representative points are seeded jitter, re-drawn while degenerate.
std::vector<IndexCell> build_index(const Scene& scene, const Cover& cover,
                                   const Cutting& cutting, const CuttingConfig& cfg,
                                   std::uint64_t seed);

/// The assembled index over one scene.
struct VisibilityIndex {
    Scene scene;
    Cover cover;
    Cutting cutting;
    std::vector<IndexCell> cells;
    CuttingConfig config;
    std::uint64_t seed = 0;
    int evg_m = 0; // EVG edge count, carried for reports
};

/// Full pipeline: EVG -> arrangement -> cover -> cutting -> index.
VisibilityIndex build_visibility_index(const Scene& scene, const CuttingConfig& cfg,
                                       std::uint64_t seed);

QueryResult query(const VisibilityIndex& index, const Point& p);

/// Same query over unbundled components, so several cuttings can share one
/// scene and cover without copying them.
QueryResult query_components(const Scene& scene, const Cover& cover, const Cutting& cutting,
                             const std::vector<IndexCell>& cells, const Point& p);

} // namespace viscount

#endif
