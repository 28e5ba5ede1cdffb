#include "sligeo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"

namespace sligeo {

void GridSpec::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw InvalidArgument("grid cell sizes must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw InvalidArgument("grid origin must be finite");
  if (rows == 0 || cols == 0) throw InvalidArgument("grid must contain at least one cell");
}

std::array<double, 2> GridSpec::center(std::size_t row, std::size_t col) const {
  return {x0 + (static_cast<double>(col) + 0.5) * dx,
          y0 + (static_cast<double>(rows - row) - 0.5) * dy};
}

GridSpec GridSpec::covering(std::span<const double> xy, double cell_size) {
  if (xy.size() < 2 || xy.size() % 2 != 0) throw InvalidArgument("need at least one 2-D point");
  if (!(cell_size > 0.0)) throw InvalidArgument("cell size must be positive");
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (std::size_t i = 0; i < xy.size(); i += 2) {
    xmin = std::min(xmin, xy[i]);
    xmax = std::max(xmax, xy[i]);
    ymin = std::min(ymin, xy[i + 1]);
    ymax = std::max(ymax, xy[i + 1]);
  }
  GridSpec g;
  g.dx = g.dy = cell_size;
  g.x0 = xmin - cell_size;
  g.y0 = ymin - cell_size;
  g.cols = static_cast<std::size_t>(std::ceil((xmax - xmin) / cell_size)) + 2;
  g.rows = static_cast<std::size_t>(std::ceil((ymax - ymin) / cell_size)) + 2;
  return g;
}

Polygon::Polygon(std::vector<std::array<double, 2>> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
  if (vertices_.size() < 3) throw InvalidArgument("polygon needs at least three vertices");
}

bool Polygon::contains(double x, double y) const {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = vertices_[i];
    const auto& b = vertices_[j];
    if ((a[1] > y) != (b[1] > y)) {
      const double xcross = (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0];
      if (x < xcross) inside = !inside;
    }
  }
  return inside;
}

Raster::Raster(GridSpec g, double fill, double nodata_value, std::string units_tag)
    : grid(g), values(g.cells(), fill), nodata(nodata_value), units(std::move(units_tag)) {}

std::size_t Raster::valid_cells() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v != nodata; }));
}

double total_volume(const Raster& raster) {
  if (raster.values.size() != raster.grid.cells())
    throw InvalidArgument("raster is not aligned to its grid");
  CompensatedSum s;
  for (double v : raster.values) {
    if (v != raster.nodata) s.add(v);
  }
  return raster.grid.cell_area() * s.value();
}

Raster raster_difference(const Raster& a, const Raster& b) {
  if (!(a.grid == b.grid)) throw InvalidArgument("rasters are defined on different grids");
  if (a.values.size() != a.grid.cells() || b.values.size() != b.grid.cells())
    throw InvalidArgument("raster is not aligned to its grid");
  Raster out(a.grid, a.nodata, a.nodata, a.units);
  for (std::size_t c = 0; c < out.values.size(); ++c) {
    if (a.is_nodata(c) || b.is_nodata(c)) continue;
    out.values[c] = a.values[c] - b.values[c];
  }
  return out;
}

Raster classify_difference(const Raster& diff, const std::array<double, 3>& edges) {
  if (!(edges[0] < edges[1] && edges[1] < edges[2]))
    throw InvalidArgument("class edges must be strictly increasing");
  Raster out(diff.grid, diff.nodata, diff.nodata, "class");
  for (std::size_t c = 0; c < out.values.size(); ++c) {
    if (diff.is_nodata(c)) continue;
    const double d = diff.values[c];
    out.values[c] = d < edges[0] ? 1.0 : d <= edges[1] ? 2.0 : d <= edges[2] ? 3.0 : 4.0;
  }
  return out;
}

std::vector<bool> cell_mask(const GridSpec& grid, const Polygon* polygon) {
  std::vector<bool> mask(grid.cells(), true);
  if (polygon == nullptr) return mask;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const auto p = grid.center(c);
    mask[c] = polygon->contains(p[0], p[1]);
  }
  return mask;
}

}  // namespace sligeo
