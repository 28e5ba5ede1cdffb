#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sligeo/grid.hpp"
#include "sligeo/sli_core.hpp"

namespace sligeo {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Strict full-string number parse; throws DataError naming `what`.
double parse_double(std::string_view text, std::string_view what);

enum class DuplicatePolicy { average, keep, error };

std::string_view duplicate_policy_name(DuplicatePolicy p);
DuplicatePolicy parse_duplicate_policy(std::string_view name);

struct ColumnMap {
  std::string x = "x";
  std::string y = "y";
  std::string value = "value";
  char delimiter = ',';
};

struct IngestResult {
  SampleSet samples;
  std::size_t rows = 0;              // data rows read
  std::size_t duplicate_groups = 0;  // locations shared by more than one row
  std::size_t merged_rows = 0;       // rows folded into another by averaging
};

/// Delimited text with a header row. Blank lines are skipped; row order is
/// preserved (a merged location keeps the position of its first row).
IngestResult read_samples(std::istream& in, const ColumnMap& columns, DuplicatePolicy policy);
IngestResult read_samples(const std::filesystem::path& path, const ColumnMap& columns,
                          DuplicatePolicy policy);

enum class RasterFormat { xyz, esri_ascii };

std::string_view raster_format_name(RasterFormat f);
RasterFormat parse_raster_format(std::string_view name);
std::string_view raster_extension(RasterFormat f);

/// esri_ascii needs square cells. A finite cell value equal to the nodata
/// sentinel is rejected because it could not be told apart on reading.
void write_raster(std::ostream& out, const Raster& raster, RasterFormat format);
void write_raster(const std::filesystem::path& path, const Raster& raster, RasterFormat format);

Raster read_esri_ascii(std::istream& in);
/// Places x,y,value rows onto the given grid by cell center; other cells
/// hold the nodata value.
Raster read_xyz(std::istream& in, const GridSpec& grid, double nodata = kDefaultNoData);
Raster read_raster(const std::filesystem::path& path, RasterFormat format,
                   const GridSpec* grid = nullptr);

/// Vertex file: two numeric columns (comma or whitespace separated); '#'
/// starts a comment and a non-numeric first line is taken as a header.
std::vector<std::array<double, 2>> read_polygon_vertices(std::istream& in);
std::vector<std::array<double, 2>> read_polygon_vertices(const std::filesystem::path& path);

}  // namespace sligeo
