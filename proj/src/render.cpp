#include "ponomarev/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ponomarev/errors.hpp"

namespace ponomarev {

namespace {

Point pixel_point(int row, int col, int res) {
  Point p(2);
  p[0] = -1.0 + 2.0 * col / (res - 1);
  p[1] = 1.0 - 2.0 * row / (res - 1);
  return p;
}

std::uint8_t to_byte(double t) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
}

void check_planar(const PonomarevMap& map, int resolution) {
  if (map.dimension() != 2)
    throw UnsupportedError("rendering needs n = 2");
  if (resolution < 2) throw DomainError("render resolution must be >= 2");
}

}  // namespace

Rendering render(const PonomarevMap& map, int resolution) {
  check_planar(map, resolution);
  const int res = resolution;
  const std::size_t pixels = std::size_t(res) * res;
  Rendering out;
  out.resolution = res;

  std::vector<double> disp(pixels), logdet(pixels);
  std::vector<char> ridge(pixels, 0);
  std::vector<double> preimage(2 * pixels);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  out.grid.assign(pixels, 255);
  out.regions.assign(pixels, 0);

  const int K = map.depth();
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const std::size_t i = std::size_t(row) * res + col;
      const Point p = pixel_point(row, col, res);
      disp[i] = (map.eval(p) - p).cwiseAbs().maxCoeff();
      out.max_displacement = std::max(out.max_displacement, disp[i]);
      try {
        logdet[i] = std::log(map.jacobian_det(p));
        lo = std::min(lo, logdet[i]);
        hi = std::max(hi, logdet[i]);
      } catch (const RidgeSetError&) {
        ridge[i] = 1;
      }
      // As a target point, p carries the preimage used for the grid image and
      // the target region structure.
      const auto pre = map.eval_inverse_detailed(p);
      preimage[2 * i] = pre.image[0];
      preimage[2 * i + 1] = pre.image[1];
      const auto& loc = pre.location;
      out.regions[i] =
          loc.region == Region::core
              ? 255
              : static_cast<std::uint8_t>(40 + (160 * (loc.depth() - 1)) /
                                                   std::max(1, K));
    }
  }

  // A pixel is on the image of the 1/8 grid when the preimage crosses a grid
  // line between it and its right or lower neighbour.
  const double cells = 8.0;
  auto cell = [&](std::size_t i, int c) {
    return std::floor((preimage[2 * i + c] + 1.0) * cells / 2.0);
  };
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const std::size_t i = std::size_t(row) * res + col;
      for (int c = 0; c < 2; ++c) {
        if ((col + 1 < res && cell(i, c) != cell(i + 1, c)) ||
            (row + 1 < res && cell(i, c) != cell(i + res, c)))
          out.grid[i] = 0;
      }
    }
  }

  out.displacement.resize(pixels);
  for (std::size_t i = 0; i < pixels; ++i)
    out.displacement[i] =
        out.max_displacement > 0 ? to_byte(disp[i] / out.max_displacement) : 0;

  out.jacobian.resize(3 * pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    if (ridge[i]) {
      out.jacobian[3 * i] = out.jacobian[3 * i + 1] = out.jacobian[3 * i + 2] = 0;
      continue;
    }
    const double t = hi > lo ? (logdet[i] - lo) / (hi - lo) : 0.5;
    out.jacobian[3 * i] = to_byte(t);
    out.jacobian[3 * i + 1] = to_byte(1.0 - std::abs(2.0 * t - 1.0));
    out.jacobian[3 * i + 2] = to_byte(1.0 - t);
  }
  return out;
}

void write_render_csv(std::ostream& out, const PonomarevMap& map,
                      int resolution) {
  check_planar(map, resolution);
  out << "row,col,x1,x2,y1,y2,displacement,jacobian,depth,region\n";
  out.precision(17);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const Point p = pixel_point(row, col, resolution);
      const auto ev = map.eval_detailed(p);
      out << row << ',' << col << ',' << p[0] << ',' << p[1] << ','
          << ev.image[0] << ',' << ev.image[1] << ','
          << (ev.image - p).cwiseAbs().maxCoeff() << ',';
      try {
        out << map.jacobian_det(p);
      } catch (const RidgeSetError&) {
        out << "nan";
      }
      out << ',' << ev.location.depth() << ','
          << (ev.location.region == Region::core ? "core" : "annulus") << '\n';
    }
  }
}

}  // namespace ponomarev
