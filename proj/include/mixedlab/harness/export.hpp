#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixedlab/harness/config.hpp"

namespace mixedlab::harness {

/// One representative point per problem family at n = 4 with default parameters.
std::vector<SweepPoint> default_export_points();

/// Writes, per point, a subdirectory holding the monolithic system (system.mtx),
/// its nonzero blocks (block_<row>_<col>.mtx), the preconditioner norm matrices
/// (norm_<name>.mtx) and manifest.txt with field order, block sizes, offsets and
/// parameters. Returns the files written, relative to `dir`.
std::vector<std::string> export_matrices(const std::filesystem::path& dir, const std::vector<SweepPoint>& points);

}  // namespace mixedlab::harness
