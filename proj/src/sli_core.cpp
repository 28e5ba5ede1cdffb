#include "sligeo/sli_core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <tuple>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/parallel.hpp"

namespace sligeo {

SampleSet::SampleSet(PointSet pts, std::vector<double> vals)
    : points(std::move(pts)), values(std::move(vals)) {
  if (values.size() != points.size())
    throw InvalidArgument("sample value count " + std::to_string(values.size()) +
                          " does not match point count " + std::to_string(points.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw InvalidArgument("non-finite sample value at index " + std::to_string(i));
  }
}

double SampleSet::mean() const {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value() / static_cast<double>(values.size());
}

SampleSet SampleSet::subset(std::span<const std::size_t> ids) const {
  std::vector<double> vals;
  vals.reserve(ids.size());
  for (std::size_t id : ids) vals.push_back(values.at(id));
  return SampleSet(points.subset(ids), std::move(vals));
}

void SliParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("scale coefficient lambda must be > 0");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw InvalidArgument("rigidity coefficient c1 must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("bandwidth factor mu must be > 0");
  if (k < 1) throw InvalidArgument("neighbor order k must be >= 1");
  if (!std::isfinite(mean)) throw InvalidArgument("mean level must be finite");
}

double WeightMatrix::at(std::size_t n, std::size_t m) const {
  auto r = row(n);
  auto it = std::lower_bound(r.begin(), r.end(), m,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == m) ? it->value : 0.0;
}

WeightMatrix compute_weights(const SampleSet& samples, const BandwidthField& bandwidths,
                             const KernelSpec& kernel, unsigned workers) {
  return compute_weights(samples, SpatialIndex(samples.points), bandwidths, kernel, workers);
}

WeightMatrix compute_weights(const SampleSet& samples, const SpatialIndex& index,
                             const BandwidthField& bandwidths, const KernelSpec& kernel,
                             unsigned workers) {
  const std::size_t n = samples.size();
  if (index.size() != n) throw InvalidArgument("spatial index does not match sample count");
  if (bandwidths.h.size() != n)
    throw InvalidArgument("bandwidth field length does not match sample count");
  for (double h : bandwidths.h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("bandwidths must be positive");
  }
  const double support = kernel.support();

  std::vector<std::vector<WeightMatrix::Entry>> rows(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const double h = bandwidths.h[i];
    // Slightly inflated search radius; membership is decided on u itself.
    const auto nb = index.radius_neighbors(samples.points[i], h * support * (1.0 + 1e-12));
    auto& row = rows[i];
    row.reserve(nb.size());
    for (const Neighbor& m : nb) {
      const double k = kernel_weight(kernel, m.distance / h);
      if (k > 0.0) row.push_back({m.id, k});
    }
    std::sort(row.begin(), row.end(),
              [](const WeightMatrix::Entry& a, const WeightMatrix::Entry& b) {
                return a.col < b.col;
              });
  });

  WeightMatrix w;
  CompensatedSum z;
  std::size_t total = 0;
  for (const auto& row : rows) {
    total += row.size();
    for (const auto& e : row) z.add(e.value);
  }
  w.z_ = z.value();
  w.entries_.reserve(total);
  w.row_ptr_.reserve(n + 1);
  for (const auto& row : rows) {
    for (const auto& e : row) w.entries_.push_back({e.col, e.value / w.z_});
    w.row_ptr_.push_back(w.entries_.size());
  }
  return w;
}

double gradient_term(const SampleSet& samples, const WeightMatrix& weights) {
  if (weights.size() != samples.size())
    throw InvalidArgument("weight matrix size does not match sample count");
  CompensatedSum s;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    for (const auto& e : weights.row(n)) {
      const double d = samples.values[n] - samples.values[e.col];
      s.add(e.value * d * d);
    }
  }
  return s.value();
}

double energy(const SampleSet& samples, const SliParams& params, const WeightMatrix& weights) {
  params.validate();
  CompensatedSum sq;
  for (double v : samples.values) {
    const double f = v - params.mean;
    sq.add(f * f);
  }
  const double n = static_cast<double>(samples.size());
  const double s1 = gradient_term(samples, weights);
  return (sq.value() / n + params.c1 * s1) / (2.0 * params.lambda);
}

double SparsePrecision::at(std::size_t i, std::size_t j) const {
  if (i == j) return diag_.at(i);
  if (j > i) std::swap(i, j);
  auto r = lower_row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

std::vector<double> SparsePrecision::multiply(std::span<const double> x) const {
  if (x.size() != size()) throw InvalidArgument("vector length does not match matrix size");
  std::vector<double> y(size());
  for (std::size_t i = 0; i < size(); ++i) y[i] = diag_[i] * x[i];
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Entry& e : lower_row(i)) {
      y[i] += e.value * x[e.col];
      y[e.col] += e.value * x[i];
    }
  }
  return y;
}

double SparsePrecision::quadratic_form(std::span<const double> x) const {
  if (x.size() != size()) throw InvalidArgument("vector length does not match matrix size");
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    s.add(diag_[i] * x[i] * x[i]);
    for (const Entry& e : lower_row(i)) s.add(2.0 * e.value * x[i] * x[e.col]);
  }
  return s.value();
}

std::vector<double> SparsePrecision::to_dense() const {
  const std::size_t n = size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag_[i];
    for (const Entry& e : lower_row(i)) {
      a[i * n + e.col] = e.value;
      a[e.col * n + i] = e.value;
    }
  }
  return a;
}

void SparsePrecision::write_coordinates(std::ostream& os) const {
  // Gather upper-triangle entries per row so output is row-major.
  std::vector<std::vector<Entry>> upper(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Entry& e : lower_row(i)) upper[e.col].push_back({i, e.value});
  }
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Entry& e : lower_row(i)) os << i << ' ' << e.col << ' ' << e.value << '\n';
    os << i << ' ' << i << ' ' << diag_[i] << '\n';
    for (const Entry& e : upper[i]) os << i << ' ' << e.col << ' ' << e.value << '\n';
  }
  os.precision(old_precision);
}

SparsePrecision build_precision(const SampleSet& samples, const SliParams& params,
                                const WeightMatrix& weights) {
  if (!(params.lambda > 0.0)) throw InvalidArgument("precision matrix requires lambda > 0");
  if (!(params.c1 > 0.0)) throw InvalidArgument("precision matrix requires c1 > 0");
  params.validate();
  const std::size_t n = samples.size();
  if (weights.size() != n) throw InvalidArgument("weight matrix size does not match sample count");

  // Symmetrized off-diagonal couplings w_{n,m} + w_{m,n}, keyed (row > col).
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(weights.stored());
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : weights.row(i)) {
      if (e.col == i) continue;
      trip.emplace_back(std::max(i, e.col), std::min(i, e.col), e.value);
    }
  }
  std::sort(trip.begin(), trip.end());

  SparsePrecision j;
  j.params_ = params;
  const double scale = params.c1 / params.lambda;
  std::vector<double> coupling(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  std::vector<SparsePrecision::Entry> lower;
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < trip.size();) {
    const auto [r, c, v] = trip[t];
    double s = v;
    std::size_t u = t + 1;
    while (u < trip.size() && std::get<0>(trip[u]) == r && std::get<1>(trip[u]) == c) {
      s += std::get<2>(trip[u]);
      ++u;
    }
    coupling[r] += s;
    coupling[c] += s;
    lower.push_back({c, -scale * s});
    rows.push_back(r);
    ++counts[r];
    t = u;
  }
  j.lower_ = std::move(lower);
  j.row_ptr_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) j.row_ptr_[i + 1] = j.row_ptr_[i] + counts[i];

  const double base = 1.0 / (static_cast<double>(n) * params.lambda);
  j.diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) j.diag_[i] = base + scale * coupling[i];
  return j;
}

double sparsity_index(const SparsePrecision& precision) {
  const double n = static_cast<double>(precision.size());
  std::size_t nonzero = 0;
  for (double d : precision.diagonal()) nonzero += d != 0.0 ? 1 : 0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    for (const auto& e : precision.lower_row(i)) nonzero += e.value != 0.0 ? 2 : 0;
  }
  return static_cast<double>(nonzero) / (n * n);
}

}  // namespace sligeo
