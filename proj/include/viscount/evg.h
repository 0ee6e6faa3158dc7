#ifndef VISCOUNT_EVG_H
#define VISCOUNT_EVG_H

#include "viscount/scene.h"

#include <iosfwd>
#include <vector>

namespace viscount {

/// One edge of the extended visibility graph.
struct EvgEdge {
    enum Kind { Vg, Extension } kind = Vg;
    Segment seg;
    std::vector<int> incident_ids; // input segments this edge is incident on
};

/// The visibility graph on segment endpoints plus the extensions of each
/// edge to its first obstacle or box hits. Edges of the graph support every
/// critical line along which the visible-segment set can change.
struct Evg {
    std::vector<std::pair<int, int>> vg_pairs; // endpoint ids (2i, 2i+1 per segment)
    std::vector<EvgEdge> edges;                // VG edges then extensions
    std::vector<int> incidence;                // m_{s_i} per input segment
    int m = 0;                                 // total edge count
};

/// A maximal critical line piece: a VG edge merged with its collinear
/// extensions (and any collinear peers), remembering every input segment id
/// whose visibility boundary can lie on it.
struct CriticalEdge {
    Segment seg;
    std::vector<int> colors; // sorted input-segment ids incident to the chord
};

/// All mutually visible endpoint pairs. Endpoint ids are 2*seg + end. The two
/// endpoints of one input segment always form an edge (the segment itself).
std::vector<std::pair<int, int>> build_vg(const Scene& scene);

Evg build_evg(const Scene& scene);

std::vector<CriticalEdge> critical_edge_set(const Evg& evg, const Scene& scene);

/// Debug dump: the scene in its file format followed by one line per edge.
void dump_evg(const Evg& evg, const Scene& scene, std::ostream& out);

} // namespace viscount

#endif
