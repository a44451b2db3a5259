#pragma once

#include "plb/io.hpp"

#include <filesystem>
#include <optional>

namespace plb {

struct SvgOptions {
    int width = 820;
    int height = 620;
    std::optional<double> bound_lambda;   // dashed vertical line
    std::optional<double> fold_lambda;    // fold marker
    std::optional<double> fold_sup;
    std::string title = "bifurcation diagram";
};

/// Bifurcation diagram (lambda horizontal, sup norm vertical) as a
/// self-contained SVG: axes, ticks, branch polyline, optional bound line and
/// fold marker.
void write_bifurcation_svg(const BranchCurve& curve, const SvgOptions& opts,
                           const std::filesystem::path& path);

} // namespace plb
