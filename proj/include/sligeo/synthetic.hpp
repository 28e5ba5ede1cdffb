#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sligeo/point_set.hpp"
#include "sligeo/sli_core.hpp"
#include "sligeo/variogram.hpp"

namespace sligeo {

struct Box2 {
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;
};

/// n points drawn uniformly in the box.
PointSet uniform_points(std::size_t n, const Box2& box, std::uint64_t seed);

/// n independent standard normal deviates (Box-Muller over a portable stream).
std::vector<double> standard_normals(std::size_t n, std::uint64_t seed);

/// One realization of a stationary Gaussian field with the given sill-bounded
/// variogram (nugget added as white noise), drawn by dense Cholesky
/// factorization of the covariance. Practical up to a few thousand points.
std::vector<double> gaussian_field(const PointSet& points, const VariogramModel& model,
                                   double mean, std::uint64_t seed);

/// Smooth deterministic surface plus white noise of the given std, cheap at
/// any size. Coordinates are scaled by `scale` before the trigonometric terms.
std::vector<double> smooth_field(const PointSet& points, double scale, double noise_std,
                                 std::uint64_t seed);

}  // namespace sligeo
