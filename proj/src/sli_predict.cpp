#include "sligeo/sli_predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/parallel.hpp"

namespace sligeo {

double PredictionTarget::coupling_sum() const {
  CompensatedSum s;
  for (const auto& c : couplings) s.add(c.to_sample + c.from_sample);
  return s.value();
}

PredictionTarget cross_weights(std::span<const double> target, const SpatialIndex& index,
                               const BandwidthField& bandwidths, const CoverRadii& cover,
                               const KernelSpec& kernel, double z_w) {
  if (!(z_w > 0.0)) throw InvalidArgument("weight normalization must be positive");
  if (bandwidths.h.size() != index.size())
    throw InvalidArgument("bandwidth field length does not match sample count");
  PredictionTarget t;
  t.location.assign(target.begin(), target.end());
  t.h_p = bandwidth_for_target(target, index, bandwidths.k, bandwidths.mu);

  const double support = kernel.support();
  const auto outward = index.radius_neighbors(target, t.h_p * support * (1.0 + 1e-12));
  const auto inward = index.covering_neighbors(target, cover);

  // Merge both candidate lists by id.
  std::vector<Neighbor> all(outward);
  all.insert(all.end(), inward.begin(), inward.end());
  std::sort(all.begin(), all.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
            all.end());

  for (const Neighbor& nb : all) {
    const double wp = kernel_weight(kernel, nb.distance / t.h_p) / z_w;
    const double wn = kernel_weight(kernel, nb.distance / bandwidths.h[nb.id]) / z_w;
    if (wp > 0.0 || wn > 0.0) t.couplings.push_back({nb.id, wp, wn});
  }
  return t;
}

Prediction predict_point(const PredictionTarget& target, std::span<const double> values,
                         const SliParams& params, bool variance_defined) {
  const double n = static_cast<double>(values.size());
  CompensatedSum num;
  CompensatedSum den;
  for (const auto& c : target.couplings) {
    if (c.id >= values.size()) throw InvalidArgument("coupling refers to a missing sample");
    const double s = c.to_sample + c.from_sample;
    num.add(s * (values[c.id] - params.mean));
    den.add(s);
  }
  // J_pp * lambda = 1/N + c1 W_p; J_pn * lambda = -c1 s_n.
  const double scaled_diag = 1.0 / n + params.c1 * den.value();
  Prediction p;
  p.value = params.mean + params.c1 * num.value() / scaled_diag;
  p.neighbor_count = target.couplings.size();
  p.h_p = target.h_p;
  if (variance_defined) {
    p.variance = params.lambda / scaled_diag;
    p.std = std::sqrt(p.variance);
  } else {
    p.variance = std::numeric_limits<double>::quiet_NaN();
    p.std = std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

namespace {

SliParams checked_params(const SliParams& params) {
  SliParams probe = params;
  if (probe.lambda == 0.0) probe.lambda = 1.0;
  probe.validate();
  return params;
}

std::vector<double> scaled(std::span<const double> h, double factor) {
  std::vector<double> out(h.begin(), h.end());
  for (double& v : out) v *= factor;
  return out;
}

}  // namespace

SliPredictor::SliPredictor(SampleSet samples, SliParams params, unsigned workers)
    : samples_(std::move(samples)),
      params_(checked_params(params)),
      variance_defined_(params.lambda != 0.0),
      index_(samples_.points),
      bandwidths_(local_bandwidths(index_, params_.k, params_.mu)),
      weights_(compute_weights(samples_, index_, bandwidths_, params_.kernel, workers)),
      cover_(index_.prepare_cover(
          scaled(bandwidths_.h, params_.kernel.support() * (1.0 + 1e-12)))) {}

PredictionTarget SliPredictor::cross_weights(std::span<const double> target) const {
  if (target.size() != samples_.points.dim())
    throw InvalidArgument("target dimension does not match samples");
  return sligeo::cross_weights(target, index_, bandwidths_, cover_, params_.kernel,
                               weights_.normalization());
}

Prediction SliPredictor::predict(std::span<const double> target) const {
  return predict_point(cross_weights(target), samples_.values, params_, variance_defined_);
}

GridPrediction SliPredictor::predict_grid(const GridSpec& grid, const std::vector<bool>* mask,
                                          unsigned workers) const {
  grid.validate();
  if (samples_.points.dim() != 2) throw InvalidArgument("grid prediction requires 2-D samples");
  if (mask != nullptr && mask->size() != grid.cells())
    throw InvalidArgument("mask size does not match grid");
  GridPrediction out{Raster(grid, kDefaultNoData), Raster(grid, kDefaultNoData),
                     Raster(grid, kDefaultNoData, kDefaultNoData, "count"),
                     Raster(grid, kDefaultNoData)};
  parallel_for(grid.cells(), workers, [&](std::size_t c) {
    if (mask != nullptr && !(*mask)[c]) return;
    const auto center = grid.center(c);
    const Prediction p = predict(center);
    out.value.values[c] = p.value;
    if (variance_defined_) out.std.values[c] = p.std;
    out.neighbors.values[c] = static_cast<double>(p.neighbor_count);
    out.bandwidth.values[c] = p.h_p;
  });
  return out;
}

}  // namespace sligeo
