#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sligeo {

/// Regular 2-D grid. Rows run north to south (row 0 is the top row, matching
/// the ESRI ASCII layout); columns run west to east. Predictions are made at
/// cell centers.
struct GridSpec {
  double x0 = 0.0;  // lower-left corner
  double y0 = 0.0;
  double dx = 1.0;  // cell width
  double dy = 1.0;  // cell height
  std::size_t cols = 0;
  std::size_t rows = 0;

  /// Throws InvalidArgument for non-positive/non-finite sizes or zero cells.
  void validate() const;
  std::size_t cells() const { return rows * cols; }
  double cell_area() const { return dx * dy; }
  std::array<double, 2> center(std::size_t row, std::size_t col) const;
  std::array<double, 2> center(std::size_t cell) const { return center(cell / cols, cell % cols); }

  /// Bounding box of the points padded by one cell on each side.
  static GridSpec covering(std::span<const double> xy, double cell_size);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Simple closed polygon; containment by the even-odd rule.
class Polygon {
 public:
  explicit Polygon(std::vector<std::array<double, 2>> vertices);
  bool contains(double x, double y) const;
  const std::vector<std::array<double, 2>>& vertices() const { return vertices_; }

 private:
  std::vector<std::array<double, 2>> vertices_;
};

inline constexpr double kDefaultNoData = -9999.0;

/// Row-major cell values aligned to a GridSpec.
struct Raster {
  GridSpec grid;
  std::vector<double> values;
  double nodata = kDefaultNoData;
  std::string units;

  Raster() = default;
  Raster(GridSpec g, double fill, double nodata_value = kDefaultNoData, std::string units_tag = {});

  bool is_nodata(std::size_t cell) const { return values[cell] == nodata; }
  std::size_t valid_cells() const;
};

/// A_c * sum of non-sentinel cell values (compensated summation).
double total_volume(const Raster& raster);

/// Cellwise a - b. Cells that are nodata in either input are nodata in the
/// result. Throws InvalidArgument when the grids differ.
Raster raster_difference(const Raster& a, const Raster& b);

/// Class codes for a difference raster with ascending edges e0 < e1 < e2:
/// 1 for d < e0, 2 for e0 <= d <= e1, 3 for e1 < d <= e2, 4 for d > e2.
Raster classify_difference(const Raster& diff, const std::array<double, 3>& edges);

/// Per-cell mask; all true when polygon is null.
std::vector<bool> cell_mask(const GridSpec& grid, const Polygon* polygon);

}  // namespace sligeo
