#include "cli/manifest.hpp"

#include <Eigen/Core>
#include <boost/crc.hpp>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "sligeo/error.hpp"

namespace sligeo::cli {

std::uint32_t crc32_bytes(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::uint32_t crc32_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for checksumming");
  boost::crc_32_type crc;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    crc.process_bytes(buf, static_cast<std::size_t>(in.gcount()));
  }
  return crc.checksum();
}

namespace {

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

json file_entry(const std::filesystem::path& path) {
  return json{{"file", path.filename().string()},
              {"bytes", std::filesystem::file_size(path)},
              {"crc32", hex32(crc32_file(path))}};
}

}  // namespace

void Manifest::write(const RunConfig& cfg, const std::filesystem::path& dir) const {
  json outputs = json::array();
  for (const auto& p : outputs_) outputs.push_back(file_entry(p));
  json input = file_entry(cfg.input.path);
  json doc{{"tool", "sligeo"},
           {"version", kToolVersion},
           {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                         "." + std::to_string(EIGEN_MINOR_VERSION)},
           {"command", command_},
           {"seed", cfg.seed},
           {"config", cfg.document},
           {"input", input},
           {"outputs", outputs}};
  if (!notes_.empty()) doc["notes"] = notes_;
  if (cfg.mask) doc["mask"] = file_entry(*cfg.mask);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace sligeo::cli
