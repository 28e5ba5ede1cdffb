#include "sligeo/synthetic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "sligeo/error.hpp"
#include "sligeo/random.hpp"

namespace sligeo {

PointSet uniform_points(std::size_t n, const Box2& box, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("point count must be >= 1");
  if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin)) throw InvalidArgument("empty box");
  std::mt19937_64 rng(seed);
  std::vector<double> xy(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    xy[2 * i] = box.xmin + uniform_unit(rng) * (box.xmax - box.xmin);
    xy[2 * i + 1] = box.ymin + uniform_unit(rng) * (box.ymax - box.ymin);
  }
  return PointSet(2, std::move(xy));
}

std::vector<double> standard_normals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; i += 2) {
    double u1;
    do {
      u1 = uniform_unit(rng);
    } while (u1 == 0.0);
    const double u2 = uniform_unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z[i] = r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < n) z[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  return z;
}

std::vector<double> gaussian_field(const PointSet& points, const VariogramModel& model,
                                   double mean, std::uint64_t seed) {
  model.validate();
  if (model.family == VariogramFamily::power)
    throw InvalidArgument("the power variogram has no covariance; cannot simulate");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cov(i, i) = model.sigma2 + 1e-10 * model.sigma2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = distance(points[i], points[j]);
      cov(i, j) = cov(j, i) = model.sigma2 * (1.0 - model_shape(model.family, r / model.xi));
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("covariance matrix is not positive definite");
  const auto z = standard_normals(static_cast<std::size_t>(2 * n), seed);
  const Eigen::VectorXd zc = Eigen::Map<const Eigen::VectorXd>(z.data(), n);
  const Eigen::VectorXd field = llt.matrixL() * zc;
  const double nug = std::sqrt(model.c0);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    values[static_cast<std::size_t>(i)] = mean + field(i) + nug * z[static_cast<std::size_t>(n + i)];
  return values;
}

std::vector<double> smooth_field(const PointSet& points, double scale, double noise_std,
                                 std::uint64_t seed) {
  if (points.dim() != 2) throw InvalidArgument("smooth field needs 2-D points");
  if (!(scale > 0.0)) throw InvalidArgument("scale must be > 0");
  const auto noise = standard_normals(points.size(), seed);
  std::vector<double> v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i][0] / scale, y = points[i][1] / scale;
    v[i] = 10.0 + 2.0 * std::sin(x) * std::cos(0.7 * y) + 1.5 * std::cos(0.5 * x + 0.3 * y) +
           0.5 * std::sin(1.7 * x - 1.1 * y) + noise_std * noise[i];
  }
  return v;
}

}  // namespace sligeo
