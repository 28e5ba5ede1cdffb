#include "sligeo/ordinary_kriging.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/parallel.hpp"

namespace sligeo {

std::string_view no_neighbor_policy_name(NoNeighborPolicy p) {
  return p == NoNeighborPolicy::nodata ? "nodata" : "global_mean";
}

NoNeighborPolicy parse_no_neighbor_policy(std::string_view name) {
  if (name == "nodata") return NoNeighborPolicy::nodata;
  if (name == "global_mean") return NoNeighborPolicy::global_mean;
  throw InvalidArgument("unknown no-neighbor policy '" + std::string(name) + "'");
}

void KrigingConfig::validate() const {
  model.validate();
  if (!(radius > 0.0) || std::isnan(radius)) throw InvalidArgument("search radius must be > 0");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Site {
  std::span<const double> where;
  double value;
};

// Groups neighbors with identical coordinates, keeping first-seen order.
std::vector<Site> merge_duplicates(const std::vector<Neighbor>& nb, const SampleSet& samples) {
  std::vector<Site> sites;
  std::vector<std::size_t> counts;
  for (const Neighbor& n : nb) {
    const auto p = samples.points[n.id];
    bool merged = false;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      if (std::equal(p.begin(), p.end(), sites[s].where.begin())) {
        sites[s].value += samples.values[n.id];
        ++counts[s];
        merged = true;
        break;
      }
    }
    if (!merged) {
      sites.push_back({p, samples.values[n.id]});
      counts.push_back(1);
    }
  }
  for (std::size_t s = 0; s < sites.size(); ++s) sites[s].value /= static_cast<double>(counts[s]);
  return sites;
}

double gamma_with_nugget(const VariogramModel& m, double d) {
  return m.c0 + m.sigma2 * model_shape(m.family, d / m.xi, m.exponent);
}

bool residual_ok(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  if (!x.allFinite()) return false;
  const double scale = a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  return (a * x - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(scale, 1e-300);
}

}  // namespace

KrigingPrediction ok_predict_point(std::span<const double> target, const SampleSet& samples,
                                   const SpatialIndex& index, const KrigingConfig& config,
                                   std::optional<std::size_t> exclude) {
  const VariogramModel& m = config.model;
  auto nb = index.radius_neighbors(target, config.radius);
  if (exclude) {
    std::erase_if(nb, [&](const Neighbor& n) { return n.id == *exclude; });
  }
  if (config.max_neighbors > 0 && nb.size() > config.max_neighbors) nb.resize(config.max_neighbors);

  KrigingPrediction out;
  if (nb.empty()) {
    out.status = KrigingPrediction::Status::no_neighbors;
    out.variance = out.std = kNaN;
    if (config.policy == NoNeighborPolicy::global_mean) {
      CompensatedSum s;
      std::size_t count = 0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (exclude && i == *exclude) continue;
        s.add(samples.values[i]);
        ++count;
      }
      out.value = count > 0 ? s.value() / static_cast<double>(count) : kNaN;
    } else {
      out.value = kNaN;
    }
    return out;
  }

  const auto sites = merge_duplicates(nb, samples);
  const auto n = static_cast<Eigen::Index>(sites.size());
  out.neighbor_count = sites.size();

  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = gamma_with_nugget(m, distance(sites[i].where, sites[j].where));
      g(i, j) = g(j, i) = v;
    }
    rhs(i) = gamma_with_nugget(m, distance(sites[i].where, target));
  }

  // Shifting every variogram entry by a constant K leaves the weights
  // unchanged under the unit-sum constraint. With K = sill the shifted matrix
  // is the covariance matrix and a symmetric factorization applies.
  double shift = m.c0 + m.sigma2;
  if (m.family == VariogramFamily::power)
    shift = 2.0 * std::max(g.maxCoeff(), rhs.maxCoeff()) + m.c0 + 1.0;
  const Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, shift) - g;
  const Eigen::VectorXd cr = Eigen::VectorXd::Constant(n, shift) - rhs;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  Eigen::VectorXd weights;
  double mult = 0.0;
  bool solved = false;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const Eigen::VectorXd a = ldlt.solve(cr);
    const Eigen::VectorXd b = ldlt.solve(ones);
    const double denom = ones.dot(b);
    if (std::isfinite(denom) && denom != 0.0) {
      mult = (1.0 - ones.dot(a)) / denom;
      weights = a + mult * b;
      solved = residual_ok(c, weights, cr + mult * ones) &&
               std::abs(weights.sum() - 1.0) <= 1e-10;
    }
  }
  if (!solved) {
    Eigen::MatrixXd bordered(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = g;
    bordered.topRightCorner(n, 1) = ones;
    bordered.bottomLeftCorner(1, n) = ones.transpose();
    bordered(n, n) = 0.0;
    Eigen::VectorXd b(n + 1);
    b.head(n) = rhs;
    b(n) = 1.0;
    const Eigen::VectorXd x = bordered.partialPivLu().solve(b);
    if (!residual_ok(bordered, x, b))
      throw NumericalError("kriging system is singular for a target with " +
                           std::to_string(sites.size()) + " neighbors");
    weights = x.head(n);
    mult = x(n);
  }

  CompensatedSum value, var, wsum;
  for (Eigen::Index i = 0; i < n; ++i) {
    value.add(weights(i) * sites[i].value);
    var.add(weights(i) * rhs(i));
    wsum.add(weights(i));
  }
  var.add(mult);
  out.value = value.value();
  out.weight_sum = wsum.value();
  out.variance = var.value();
  if (out.variance < 0.0) {
    out.clamped = out.variance < -1e-10;
    out.variance = 0.0;
  }
  out.std = std::sqrt(out.variance);
  return out;
}

KrigingGrid ok_predict_grid(const GridSpec& grid, const SampleSet& samples,
                            const SpatialIndex& index, const KrigingConfig& config,
                            const std::vector<bool>* mask, unsigned workers) {
  grid.validate();
  config.validate();
  if (samples.points.dim() != 2) throw InvalidArgument("grid kriging requires 2-D samples");
  if (mask != nullptr && mask->size() != grid.cells())
    throw InvalidArgument("mask size does not match grid");
  KrigingGrid out{Raster(grid, kDefaultNoData), Raster(grid, kDefaultNoData),
                  Raster(grid, kDefaultNoData, kDefaultNoData, "count"), 0, 0};
  std::vector<unsigned char> clamped(grid.cells(), 0), empty(grid.cells(), 0);
  parallel_for(grid.cells(), workers, [&](std::size_t c) {
    if (mask != nullptr && !(*mask)[c]) return;
    const auto center = grid.center(c);
    const auto p = ok_predict_point(center, samples, index, config);
    clamped[c] = p.clamped;
    empty[c] = p.status == KrigingPrediction::Status::no_neighbors;
    out.neighbors.values[c] = static_cast<double>(p.neighbor_count);
    if (std::isfinite(p.value)) out.value.values[c] = p.value;
    if (std::isfinite(p.std)) out.std.values[c] = p.std;
  });
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    out.clamped += clamped[c];
    out.no_neighbor_cells += empty[c];
  }
  return out;
}

}  // namespace sligeo
