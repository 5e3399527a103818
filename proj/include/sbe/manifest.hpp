#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sbe {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Everything needed to re-derive an output file: subcommand, resolved flags,
/// seed, library version and a fingerprint of the dataset bytes. Written next
/// to each output as <output>.manifest.json.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> flags;  // resolved, in order
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::uint64_t dataset_fingerprint = 0;
  std::vector<std::string> outputs;

  std::string to_json() const;
  void write_for(const std::filesystem::path& output_path) const;
};

}  // namespace sbe
