#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sligeo/grid.hpp"
#include "sligeo/kernels.hpp"
#include "sligeo/sli_core.hpp"
#include "sligeo/spatial_index.hpp"

namespace sligeo {

/// Couplings between one prediction point and the samples. Both directions
/// are normalized by the sample-only Z_w, so appending the target leaves the
/// sample-sample block of J untouched.
struct PredictionTarget {
  struct Coupling {
    std::size_t id;
    double to_sample;    // w_{p,n} = K(d / h_p) / Z_w
    double from_sample;  // w_{n,p} = K(d / h_n) / Z_w
  };

  std::vector<double> location;
  double h_p = 0.0;
  std::vector<Coupling> couplings;  // ascending id, zero pairs omitted

  double coupling_sum() const;
};

struct Prediction {
  double value = 0.0;
  double std = 0.0;       // NaN when the scale coefficient is degenerate
  double variance = 0.0;  // 1 / J_pp
  std::size_t neighbor_count = 0;
  double h_p = 0.0;
};

/// Cross weights for a single target. `cover` must come from
/// index.prepare_cover(h_n * kernel.support()).
PredictionTarget cross_weights(std::span<const double> target, const SpatialIndex& index,
                               const BandwidthField& bandwidths, const CoverRadii& cover,
                               const KernelSpec& kernel, double z_w);

/// Conditional mean and variance of the target given the samples. Only the
/// variance touches lambda; the value is computed from c1 alone.
Prediction predict_point(const PredictionTarget& target, std::span<const double> values,
                         const SliParams& params, bool variance_defined = true);

struct GridPrediction {
  Raster value;
  Raster std;
  Raster neighbors;
  Raster bandwidth;
};

/// Precomputed state for repeated predictions against a fixed sample set.
class SliPredictor {
 public:
  /// A lambda of exactly 0 (constant data) is accepted; predictions then
  /// carry NaN standard deviations.
  SliPredictor(SampleSet samples, SliParams params, unsigned workers = 1);

  const SampleSet& samples() const { return samples_; }
  const SliParams& params() const { return params_; }
  const SpatialIndex& index() const { return index_; }
  const BandwidthField& bandwidths() const { return bandwidths_; }
  const WeightMatrix& weights() const { return weights_; }
  bool variance_defined() const { return variance_defined_; }

  PredictionTarget cross_weights(std::span<const double> target) const;
  Prediction predict(std::span<const double> target) const;

  /// Masked-out cells hold the raster nodata value. Results do not depend on
  /// the worker count.
  GridPrediction predict_grid(const GridSpec& grid, const std::vector<bool>* mask = nullptr,
                              unsigned workers = 1) const;

 private:
  SampleSet samples_;
  SliParams params_;
  bool variance_defined_ = true;
  SpatialIndex index_;
  BandwidthField bandwidths_;
  WeightMatrix weights_;
  CoverRadii cover_;
};

}  // namespace sligeo
