#pragma once

#include <string>

#include <json.hpp>

#include "morsewig/states.hpp"
#include "morsewig/wigner.hpp"

namespace morsewig {

/// {N, hbar, omega, mass, label, coeffs: [[re, im], ...]}. Doubles are
/// written with 17 significant digits, so reading back is bit-exact.
nlohmann::json state_to_json(const BoundState& state);
BoundState state_from_json(const nlohmann::json& j);

/// Writes content to a sibling temp file, then renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// "# morsewig grid v1; N=...; method=...; label=...", a column line
/// "x,p,w", then one row per lattice point with x outer and p inner.
std::string grid_to_csv(const PhaseSpaceGrid& grid);

/// Inverse of grid_to_csv; meta holds the header fields.
PhaseSpaceGrid grid_from_csv(const std::string& text);

/// Metadata sidecar: meta plus the lattice bounds and sizes.
nlohmann::json grid_to_json(const PhaseSpaceGrid& grid);

/// Binary P6 heatmap, one pixel per cell, p increasing upwards. White at
/// W = 0, red ramp for W > 0 and blue ramp for W < 0, both scaled to the
/// grid's max |W|.
std::string grid_to_ppm(const PhaseSpaceGrid& grid);

/// The same cells as SVG rectangles.
std::string grid_to_svg(const PhaseSpaceGrid& grid);

struct Rgb {
  unsigned char r, g, b;
};

/// Colormap used by both image formats; v is W / max|W| in [-1, 1].
Rgb diverging_color(double v);

}  // namespace morsewig
