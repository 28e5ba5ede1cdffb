#include "sligeo/point_set.hpp"

#include <cmath>
#include <string>

#include "sligeo/error.hpp"

namespace sligeo {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InvalidArgument("point set dimension must be >= 1");
  if (coords_.empty()) throw InvalidArgument("point set must contain at least one point");
  if (coords_.size() % dim_ != 0)
    throw InvalidArgument("coordinate buffer length " + std::to_string(coords_.size()) +
                          " is not a multiple of dimension " + std::to_string(dim_));
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i]))
      throw InvalidArgument("non-finite coordinate for point " + std::to_string(i / dim_));
  }
}

PointSet PointSet::from_xy(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("x and y coordinate lists differ in length");
  std::vector<double> coords;
  coords.reserve(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    coords.push_back(x[i]);
    coords.push_back(y[i]);
  }
  return PointSet(2, std::move(coords));
}

PointSet PointSet::subset(std::span<const std::size_t> ids) const {
  std::vector<double> coords;
  coords.reserve(ids.size() * dim_);
  for (std::size_t id : ids) {
    if (id >= size()) throw InvalidArgument("subset index out of range");
    auto p = (*this)[id];
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(dim_, std::move(coords));
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace sligeo
