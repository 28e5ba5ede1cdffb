#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sligeo/grid.hpp"
#include "sligeo/sli_core.hpp"
#include "sligeo/spatial_index.hpp"
#include "sligeo/variogram.hpp"

namespace sligeo {

enum class NoNeighborPolicy { nodata, global_mean };

std::string_view no_neighbor_policy_name(NoNeighborPolicy p);
NoNeighborPolicy parse_no_neighbor_policy(std::string_view name);

struct KrigingConfig {
  VariogramModel model;
  double radius = 1.0;
  std::size_t max_neighbors = 64;  // 0: every sample inside the radius
  NoNeighborPolicy policy = NoNeighborPolicy::nodata;

  void validate() const;
};

struct KrigingPrediction {
  enum class Status { solved, no_neighbors };

  Status status = Status::solved;
  double value = 0.0;     // NaN for nodata policy without neighbors
  double variance = 0.0;  // NaN without neighbors
  double std = 0.0;
  std::size_t neighbor_count = 0;  // distinct locations after merging duplicates
  double weight_sum = 0.0;
  bool clamped = false;  // variance was below -1e-10 and set to 0
};

/// Kriging from the samples inside the search radius. The right-hand side
/// uses c0 + sigma2 g(d / xi) for every neighbor, including d = 0, so the
/// nugget acts as measurement error: the predictor is exact at samples only
/// when c0 = 0. Samples sharing coordinates are averaged first. `exclude`
/// drops one sample id (leave-one-out).
KrigingPrediction ok_predict_point(std::span<const double> target, const SampleSet& samples,
                                   const SpatialIndex& index, const KrigingConfig& config,
                                   std::optional<std::size_t> exclude = std::nullopt);

struct KrigingGrid {
  Raster value;
  Raster std;
  Raster neighbors;
  std::size_t clamped = 0;
  std::size_t no_neighbor_cells = 0;
};

KrigingGrid ok_predict_grid(const GridSpec& grid, const SampleSet& samples,
                            const SpatialIndex& index, const KrigingConfig& config,
                            const std::vector<bool>* mask = nullptr, unsigned workers = 1);

}  // namespace sligeo
