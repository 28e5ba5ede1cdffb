#include "sligeo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"

namespace sligeo {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\"";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ','))
      ++i;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ',')
      ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

bool try_parse(std::string_view text, double& v) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  double v;
  if (!try_parse(text, v))
    throw DataError(std::string(what) + ": '" + std::string(trim(text)) + "' is not a number");
  return v;
}

std::string_view duplicate_policy_name(DuplicatePolicy p) {
  switch (p) {
    case DuplicatePolicy::average: return "average";
    case DuplicatePolicy::keep: return "keep";
    case DuplicatePolicy::error: return "error";
  }
  return "average";
}

DuplicatePolicy parse_duplicate_policy(std::string_view name) {
  for (auto p : {DuplicatePolicy::average, DuplicatePolicy::keep, DuplicatePolicy::error}) {
    if (duplicate_policy_name(p) == name) return p;
  }
  throw InvalidArgument("unknown duplicate policy '" + std::string(name) + "'");
}

IngestResult read_samples(std::istream& in, const ColumnMap& columns, DuplicatePolicy policy) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      header = split(header_line, columns.delimiter);
      break;
    }
  }
  if (header.empty()) throw DataError("input is empty (no header row)");
  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError("column '" + name + "' not found in header '" + std::string(trim(header_line)) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = find(columns.x), cy = find(columns.y), cv = find(columns.value);
  const std::size_t need = std::max({cx, cy, cv}) + 1;

  std::vector<double> xy, vals;
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, columns.delimiter);
    if (cells.size() < need)
      throw DataError("row " + std::to_string(line_no) + ": expected at least " +
                      std::to_string(need) + " fields, found " + std::to_string(cells.size()));
    auto cell = [&](std::size_t c, const std::string& name) {
      double v;
      if (!try_parse(cells[c], v) || !std::isfinite(v))
        throw DataError("row " + std::to_string(line_no) + ", column '" + name + "': '" +
                        std::string(cells[c]) + "' is not a finite number");
      return v;
    };
    xy.push_back(cell(cx, columns.x));
    xy.push_back(cell(cy, columns.y));
    vals.push_back(cell(cv, columns.value));
    lines.push_back(line_no);
  }
  if (vals.empty()) throw DataError("input has a header but no data rows");

  IngestResult res{SampleSet(PointSet(2, xy), vals), vals.size(), 0, 0};
  std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < vals.size(); ++i) groups[{xy[2 * i], xy[2 * i + 1]}].push_back(i);
  for (const auto& [loc, rows] : groups) {
    if (rows.size() < 2) continue;
    ++res.duplicate_groups;
    if (policy == DuplicatePolicy::error)
      throw DataError("rows " + std::to_string(lines[rows[0]]) + " and " +
                      std::to_string(lines[rows[1]]) + " share coordinates (" +
                      format_double(loc.first) + ", " + format_double(loc.second) + ")");
  }
  if (policy != DuplicatePolicy::average || res.duplicate_groups == 0) return res;

  std::vector<double> out_xy, out_vals;
  std::vector<bool> done(vals.size(), false);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (done[i]) continue;
    const auto& rows = groups[{xy[2 * i], xy[2 * i + 1]}];
    CompensatedSum s;
    for (std::size_t r : rows) {
      s.add(vals[r]);
      done[r] = true;
    }
    out_xy.push_back(xy[2 * i]);
    out_xy.push_back(xy[2 * i + 1]);
    out_vals.push_back(s.value() / static_cast<double>(rows.size()));
    res.merged_rows += rows.size() - 1;
  }
  res.samples = SampleSet(PointSet(2, std::move(out_xy)), std::move(out_vals));
  return res;
}

IngestResult read_samples(const std::filesystem::path& path, const ColumnMap& columns,
                          DuplicatePolicy policy) {
  auto in = open_in(path);
  return read_samples(in, columns, policy);
}

std::string_view raster_format_name(RasterFormat f) {
  return f == RasterFormat::xyz ? "xyz" : "esri_ascii";
}

RasterFormat parse_raster_format(std::string_view name) {
  if (name == "xyz") return RasterFormat::xyz;
  if (name == "esri_ascii") return RasterFormat::esri_ascii;
  throw InvalidArgument("unknown raster format '" + std::string(name) +
                        "' (expected xyz or esri_ascii)");
}

std::string_view raster_extension(RasterFormat f) {
  return f == RasterFormat::xyz ? ".xyz" : ".asc";
}

void write_raster(std::ostream& out, const Raster& raster, RasterFormat format) {
  const GridSpec& g = raster.grid;
  g.validate();
  if (raster.values.size() != g.cells()) throw InvalidArgument("raster is not aligned to its grid");
  for (double v : raster.values) {
    if (std::isnan(v)) throw DataError("raster contains NaN; mark such cells with the nodata value");
  }
  if (format == RasterFormat::esri_ascii) {
    if (g.dx != g.dy)
      throw InvalidArgument("esri_ascii needs square cells (dx=" + format_double(g.dx) +
                            ", dy=" + format_double(g.dy) + "); use the xyz format instead");
    out << "ncols " << g.cols << "\nnrows " << g.rows << "\nxllcorner " << format_double(g.x0)
        << "\nyllcorner " << format_double(g.y0) << "\ncellsize " << format_double(g.dx)
        << "\nNODATA_value " << format_double(raster.nodata) << '\n';
    for (std::size_t r = 0; r < g.rows; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) {
        if (c > 0) out << ' ';
        out << format_double(raster.values[r * g.cols + c]);
      }
      out << '\n';
    }
  } else {
    out << "x,y,value\n";
    for (std::size_t cell = 0; cell < g.cells(); ++cell) {
      if (raster.is_nodata(cell)) continue;
      const auto p = g.center(cell);
      out << format_double(p[0]) << ',' << format_double(p[1]) << ','
          << format_double(raster.values[cell]) << '\n';
    }
  }
  if (!out) throw DataError("failed writing raster");
}

void write_raster(const std::filesystem::path& path, const Raster& raster, RasterFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_raster(out, raster, format);
}

Raster read_esri_ascii(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string key, val;
  const char* names[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};
  for (const char* expect : names) {
    if (!(in >> key >> val)) throw DataError("truncated ESRI ASCII header");
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (key != expect) throw DataError("ESRI ASCII header: expected '" + std::string(expect) +
                                       "', found '" + key + "'");
    header[key] = val;
  }
  GridSpec g;
  const double cols = parse_double(header["ncols"], "ncols");
  const double rows = parse_double(header["nrows"], "nrows");
  if (!(cols >= 1.0) || !(rows >= 1.0) || cols != std::floor(cols) || rows != std::floor(rows))
    throw DataError("ESRI ASCII header: ncols and nrows must be positive integers");
  g.cols = static_cast<std::size_t>(cols);
  g.rows = static_cast<std::size_t>(rows);
  g.x0 = parse_double(header["xllcorner"], "xllcorner");
  g.y0 = parse_double(header["yllcorner"], "yllcorner");
  g.dx = g.dy = parse_double(header["cellsize"], "cellsize");
  g.validate();
  Raster r(g, 0.0, parse_double(header["nodata_value"], "NODATA_value"));
  std::string tok;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    if (!(in >> tok)) throw DataError("ESRI ASCII body ends after " + std::to_string(i) + " values");
    r.values[i] = parse_double(tok, "cell " + std::to_string(i));
  }
  return r;
}

Raster read_xyz(std::istream& in, const GridSpec& grid, double nodata) {
  grid.validate();
  Raster r(grid, nodata, nodata);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    double x, y, v;
    if (f.size() < 3 || !try_parse(f[0], x) || !try_parse(f[1], y)) {
      if (line_no == 1) continue;  // header
      throw DataError("xyz line " + std::to_string(line_no) + " is malformed");
    }
    v = parse_double(f[2], "xyz line " + std::to_string(line_no));
    const double cf = (x - grid.x0) / grid.dx - 0.5;
    const double rf = static_cast<double>(grid.rows) - (y - grid.y0) / grid.dy - 0.5;
    const double c = std::round(cf), rr = std::round(rf);
    if (c < 0 || rr < 0 || c >= static_cast<double>(grid.cols) ||
        rr >= static_cast<double>(grid.rows) || std::abs(cf - c) > 1e-6 || std::abs(rf - rr) > 1e-6)
      throw DataError("xyz line " + std::to_string(line_no) + " is not at a cell center of the grid");
    r.values[static_cast<std::size_t>(rr) * grid.cols + static_cast<std::size_t>(c)] = v;
  }
  return r;
}

Raster read_raster(const std::filesystem::path& path, RasterFormat format, const GridSpec* grid) {
  auto in = open_in(path);
  if (format == RasterFormat::esri_ascii) return read_esri_ascii(in);
  if (grid == nullptr) throw InvalidArgument("reading an xyz raster needs the grid specification");
  return read_xyz(in, *grid);
}

std::vector<std::array<double, 2>> read_polygon_vertices(std::istream& in) {
  std::vector<std::array<double, 2>> verts;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto f = split_ws(line);
    if (f.empty()) continue;
    const bool first = !seen_content;
    seen_content = true;
    double x, y;
    if (f.size() < 2 || !try_parse(f[0], x) || !try_parse(f[1], y)) {
      if (first) continue;  // header
      throw DataError("polygon line " + std::to_string(line_no) + " is not an x y pair");
    }
    verts.push_back({x, y});
  }
  return verts;
}

std::vector<std::array<double, 2>> read_polygon_vertices(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_polygon_vertices(in);
}

}  // namespace sligeo
