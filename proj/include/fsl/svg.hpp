#pragma once

// Minimal static SVG renderings of walk output: line plots for 1D
// distributions, Cartan-plane heat maps for 2D ones. Best effort,
// behind the CLI --plot flag.

#include "fsl/walk.hpp"

#include <string>
#include <vector>

namespace fsl::svg {

/// One polyline per snapshot over the 1D Cartan coordinate.
std::string render_line_plot(const std::vector<walk::Snapshot>& snapshots,
                             const std::string& title, const std::string& meta_comment);

/// Heat map of sqrt(P) over the 2D Cartan plane for the last snapshot.
std::string render_heat_map(const observables::Distribution& dist,
                            const std::string& title, const std::string& meta_comment);

}  // namespace fsl::svg
