#ifndef VISCOUNT_INDEX_IO_H
#define VISCOUNT_INDEX_IO_H

#include "viscount/cutting.h"

#include <iosfwd>
#include <string>

namespace viscount {

/// Versioned text container. Exact rationals are written as decimal strings
/// of numerator/denominator, so a round trip is lossless. The geometry is
/// rebuilt deterministically from the embedded scene, configuration and seed
/// on load, and the stored structure digests, representative points and
/// counts are verified against the rebuild (IndexFormatError on any drift).
void save_index(const VisibilityIndex& index, std::ostream& out);
void save_index_file(const VisibilityIndex& index, const std::string& path);

VisibilityIndex load_index(std::istream& in);
VisibilityIndex load_index_file(const std::string& path);

} // namespace viscount

#endif
