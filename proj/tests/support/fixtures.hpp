#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sligeo/point_set.hpp"
#include "sligeo/random.hpp"
#include "sligeo/sli_core.hpp"

namespace fixture {

inline sligeo::PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed,
                                      double extent = 10.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> c(n * dim);
  for (double& v : c) v = extent * sligeo::uniform_unit(rng);
  return sligeo::PointSet(dim, std::move(c));
}

inline std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = -3.0,
                                         double hi = 5.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * sligeo::uniform_unit(rng);
  return v;
}

inline sligeo::SampleSet random_samples(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return sligeo::SampleSet(random_points(n, dim, seed), random_values(n, seed + 1));
}

inline oracle::Pts to_pts(const sligeo::PointSet& p) {
  oracle::Pts out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p[i].begin(), p[i].end());
  return out;
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

}  // namespace fixture
