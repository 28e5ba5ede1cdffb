#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sligeo {

/// Box constraint for one coordinate. Infinite ends are allowed; lo == hi
/// pins the coordinate. With log_scale the search runs over log(x), which
/// requires lo > 0.
struct Bound {
  double lo;
  double hi;
  bool log_scale = false;
};

struct NelderMeadOptions {
  std::size_t max_iterations = 200;
  double x_tolerance = 1e-6;   // simplex diameter in transformed coordinates
  double f_tolerance = 1e-10;  // relative spread of vertex values
  double initial_step = 0.3;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex search inside a box. The box is mapped onto an
/// unconstrained space (sine map for two finite ends, square map for one),
/// so every evaluated point is feasible. Non-finite objective values are
/// treated as +inf. With max_iterations == 0 the start point is returned as is.
OptimizeResult minimize_bounded(const Objective& f, std::span<const double> x0,
                                std::span<const Bound> bounds, const NelderMeadOptions& options);

/// Runs `starts` local searches: the first from x0, the rest from points drawn
/// uniformly (log-uniformly for log-scale bounds) inside the box. Unbounded
/// ends are replaced by x0 scaled by 100 in that direction. Returns every
/// run in start order.
std::vector<OptimizeResult> minimize_multistart(const Objective& f, std::span<const double> x0,
                                                std::span<const Bound> bounds,
                                                const NelderMeadOptions& options,
                                                std::size_t starts, std::uint64_t seed);

}  // namespace sligeo
