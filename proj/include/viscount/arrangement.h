#ifndef VISCOUNT_ARRANGEMENT_H
#define VISCOUNT_ARRANGEMENT_H

#include "viscount/evg.h"
#include "viscount/trapmap.h"
#include "viscount/visibility.h"

#include <memory>

namespace viscount {

/// Trapezoidal decomposition of the critical edges, with enough metadata to
/// label faces: every subsegment knows its source critical edge and whether
/// it lies inside an input obstacle (sight cannot cross there).
struct TrapArrangement {
    std::vector<CriticalEdge> edges;
    std::unique_ptr<TrapMap> trapmap;
    std::vector<char> sub_solid; // per trapmap subsegment
    long crossing_count = 0;     // interior contact points found while splitting
};

TrapArrangement build_trap_map(const std::vector<CriticalEdge>& edges, const Scene& scene,
                               std::uint64_t seed);

enum class LabelMode { BfsCorrected, OracleDirect };

/// Visible-segment set per trapezoid (face label). Labels of zero-width
/// slivers are not materialized; real trapezoids all get labels.
struct FaceLabels {
    std::vector<std::vector<int>> label; // indexed by trapezoid id
    std::vector<char> labeled;
    int audited = 0;       // labels cross-checked against the oracle
    int bfs_unreached = 0; // labeled by oracle because BFS never arrived
};

/// Labels equal visible_count_oracle at each representative point. The BFS
/// mode walks face adjacency and re-tests only the colors carried by each
/// crossed critical edge, auditing every `audit_every`-th face against the
/// full oracle (VerificationMismatch on any disagreement).
FaceLabels label_faces(const TrapArrangement& arr, const Scene& scene,
                       LabelMode mode = LabelMode::BfsCorrected, int audit_every = 50);

/// Trapezoid containing p; throws OnBoundary on any decomposition edge.
int locate(const TrapArrangement& arr, const Point& p);

struct BaselineResult {
    CountResult count;
    bool used_fallback = false;
};

/// O(log) label lookup; falls back to the oracle on boundary points.
BaselineResult baseline_query(const TrapArrangement& arr, const FaceLabels& labels,
                              const Scene& scene, const Point& p);

struct ArrangementStats {
    long trapezoids = 0; // real (positive-width) trapezoids
    long slivers = 0;
    long crossings = 0;
    std::vector<std::pair<int, long>> label_histogram; // m value -> face count
};

ArrangementStats arrangement_stats(const TrapArrangement& arr, const FaceLabels& labels);

} // namespace viscount

#endif
