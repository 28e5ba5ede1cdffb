#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sligeo/point_set.hpp"

namespace sligeo {

struct Neighbor {
  std::size_t id;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Per-point search radii prepared against a specific index (subtree maxima).
class CoverRadii {
 public:
  std::span<const double> radii() const { return radii_; }

 private:
  friend class SpatialIndex;
  std::vector<double> radii_;
  std::vector<double> node_max_;
};

/// Exact kd-tree over a PointSet.
///
/// Immutable after construction, so concurrent queries are safe. All queries
/// return exactly what a linear scan computing `distance()` would return.
class SpatialIndex {
 public:
  explicit SpatialIndex(PointSet points);

  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// The m nearest points, ascending by (distance, id). m is clamped to size().
  std::vector<Neighbor> nearest(std::span<const double> query, std::size_t m) const;

  /// Distance to the k-th nearest indexed point (1-based k). With
  /// exclude_self, one point at distance exactly 0 (the query itself) is
  /// skipped before counting. Throws InvalidArgument when k is out of range:
  /// k must satisfy 1 <= k <= n, and k < n when exclude_self is set.
  double knn_distance(std::span<const double> query, std::size_t k, bool exclude_self) const;

  /// All points with distance <= radius (closed ball), ascending by
  /// (distance, id).
  std::vector<Neighbor> radius_neighbors(std::span<const double> query, double radius) const;

  /// Prepares per-point radii for covering_neighbors(); radii.size() == size().
  CoverRadii prepare_cover(std::span<const double> radii) const;

  /// All points i with distance(query, p_i) <= radii[i], ascending by id.
  std::vector<Neighbor> covering_neighbors(std::span<const double> query,
                                           const CoverRadii& cover) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t left = 0;   // 0 means leaf (root is never a child)
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end, std::size_t depth);
  double box_distance_sq(std::size_t node, std::span<const double> q) const;
  double point_distance_sq(std::size_t id, std::span<const double> q) const;

  PointSet points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

}  // namespace sligeo
