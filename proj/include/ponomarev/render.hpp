#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ponomarev/mapping.hpp"

namespace ponomarev {

/// Raster views of a planar map. Pixel (row, col) sits at
/// x1 = -1 + 2 col/(res-1), x2 = 1 - 2 row/(res-1), so border pixels lie on
/// the boundary of the square.
struct Rendering {
  int resolution = 0;
  std::vector<std::uint8_t> displacement;  ///< |f(x) - x|_inf scaled to 0..255
  std::vector<std::uint8_t> jacobian;      ///< rgb ramp of log Jf, black on ridges
  std::vector<std::uint8_t> grid;          ///< image of a 1/8 grid under f
  std::vector<std::uint8_t> regions;       ///< target cores 255, annuli by depth
  double max_displacement = 0;
};

/// Throws UnsupportedError unless n == 2.
Rendering render(const PonomarevMap& map, int resolution);

/// Per-pixel table: row, col, x1, x2, y1, y2, displacement, jacobian, depth, region.
void write_render_csv(std::ostream& out, const PonomarevMap& map, int resolution);

}  // namespace ponomarev
