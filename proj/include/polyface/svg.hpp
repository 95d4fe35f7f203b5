#ifndef POLYFACE_SVG_HPP
#define POLYFACE_SVG_HPP

#include <string>

namespace polyface {

/**
 * Render a phase-diagram CSV (the phase_diagram schema) as a static SVG
 * heatmap: delta on the horizontal axis, rho vertical, one cell per grid
 * point colored by the empirical ratio (grey for exact-only cells), with
 * the weak-threshold curve max(0, 2 - 1/delta) overlaid as a polyline.
 * Throws std::runtime_error on malformed or empty tables.
 */
std::string render_svg_heatmap(const std::string& phase_csv);

/// render_svg_heatmap from a CSV file to an SVG file; nothing is written
/// when rendering fails.
void emit_svg_heatmap(const std::string& csv_path, const std::string& svg_path);

}  // namespace polyface

#endif  // POLYFACE_SVG_HPP
