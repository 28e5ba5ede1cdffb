#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cli/config.hpp"

namespace sligeo::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

std::uint32_t crc32_bytes(std::string_view bytes);
std::uint32_t crc32_file(const std::filesystem::path& path);

/// Collects the files a run writes and emits manifest.json next to them.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void add_output(const std::filesystem::path& path) { outputs_.push_back(path); }
  void note(const std::string& key, json value) { notes_[key] = std::move(value); }

  /// Writes <dir>/manifest.json. Holds no timestamps, host names or worker
  /// counts, so identical inputs give identical manifests.
  void write(const RunConfig& cfg, const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::vector<std::filesystem::path> outputs_;
  json notes_ = json::object();
};

}  // namespace sligeo::cli
