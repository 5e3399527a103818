#include "sbe/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "sbe/errors.hpp"

namespace sbe {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  nlohmann::ordered_json f;
  for (const auto& [key, value] : flags) f[key] = value;
  j["flags"] = f;
  j["seed"] = seed;
  j["version"] = version;
  char hex[19];
  std::snprintf(hex, sizeof(hex), "0x%016llx",
                static_cast<unsigned long long>(dataset_fingerprint));
  j["dataset_fingerprint"] = hex;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void RunManifest::write_for(const std::filesystem::path& output_path) const {
  const std::filesystem::path manifest_path =
      output_path.string() + ".manifest.json";
  std::ofstream f(manifest_path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + manifest_path.string());
  const std::string body = to_json();
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw FormatError("write failed: " + manifest_path.string());
}

}  // namespace sbe
