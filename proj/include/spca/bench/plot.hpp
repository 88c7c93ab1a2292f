#pragma once

#include <string>
#include <vector>

namespace spca::bench {

/// Renders, for every (d, k) present in the CSV files, an l2-error-vs-n panel
/// (mean with a mean +- std band) and a recovery-probability-vs-n panel as SVG.
/// Throws std::runtime_error("no series") when there is nothing to draw and
/// std::invalid_argument on malformed input. Returns the written paths.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths, const std::string& output_dir);

}  // namespace spca::bench
