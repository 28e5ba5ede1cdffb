#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sligeo {

/// Scattered points in d dimensions, stored row-major in one flat buffer.
///
/// Point i always refers to the same coordinates; there is no reordering.
class PointSet {
 public:
  /// Throws InvalidArgument when dim == 0, the buffer is empty, its length is
  /// not a multiple of dim, or any coordinate is non-finite.
  PointSet(std::size_t dim, std::vector<double> coords);

  static PointSet from_xy(std::span<const double> x, std::span<const double> y);

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  /// New set holding the points at `ids`, in the given order.
  PointSet subset(std::span<const std::size_t> ids) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// Euclidean distance. Coordinates are accumulated in axis order, so every
/// caller computing a distance between the same two points gets the same bits.
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace sligeo
