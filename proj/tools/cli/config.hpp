#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sligeo/error.hpp"
#include "sligeo/grid.hpp"
#include "sligeo/io.hpp"
#include "sligeo/ordinary_kriging.hpp"
#include "sligeo/param_estimation.hpp"
#include "sligeo/validation.hpp"
#include "sligeo/variogram.hpp"

namespace sligeo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct InputSection {
  fs::path path;
  ColumnMap columns;
  DuplicatePolicy duplicates = DuplicatePolicy::average;
};

struct GridSection {
  std::optional<GridSpec> grid;
  double auto_cell_size = 0.0;
};

struct SliSection {
  std::optional<fs::path> model_path;
  // Explicit parameters; lambda and mean are derived from the data when absent.
  std::optional<SliParams> params;
  bool lambda_given = false;
  bool mean_given = false;
  EstimationConfig estimation;
};

struct VariogramSection {
  LagBins bins;
  std::vector<VariogramFamily> families{kAllVariogramFamilies.begin(),
                                        kAllVariogramFamilies.end()};
  VariogramFitOptions fit;
};

struct KrigingSection {
  std::optional<VariogramModel> model;  // fitted from the variogram section when absent
  std::optional<double> radius;         // defaults to the model's xi
  std::size_t max_neighbors = 64;
  NoNeighborPolicy policy = NoNeighborPolicy::nodata;
};

struct LpoSection {
  double rate = 0.1;
  std::size_t folds = 10;
};

struct ValidationSection {
  bool loo = true;
  std::optional<LpoSection> lpo;
  OutlierRule outlier_rule = OutlierRule::standard;
  bool sli = true;
  bool ok = true;
};

struct CompareSection {
  std::array<double, 3> bands{-1.0, 1.0, 3.5};
};

struct RunConfig {
  json document;  // the parsed file, echoed into the manifest
  fs::path base_dir;
  InputSection input;
  GridSection grid;
  std::optional<fs::path> mask;
  fs::path output_dir = "sligeo_out";
  RasterFormat raster_format = RasterFormat::xyz;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  SliSection sli;
  VariogramSection variogram;
  KrigingSection kriging;
  ValidationSection validation;
  CompareSection compare;
};

/// Parses a configuration document. Relative paths are resolved against
/// base_dir. Unknown keys are rejected.
RunConfig parse_config(const json& doc, const fs::path& base_dir);
RunConfig load_config(const fs::path& path);

json model_to_json(const FittedModel& model);
FittedModel model_from_json(const json& doc);

json variogram_model_to_json(const VariogramModel& model);
VariogramModel variogram_model_from_json(const json& doc, const std::string& where);

}  // namespace sligeo::cli
