#ifndef BELHD_MANIFEST_H_
#define BELHD_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace belhd {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path &path);

struct ManifestFile {
  std::string role;
  std::string path;
  std::string sha256;

  friend bool operator==(const ManifestFile &, const ManifestFile &) = default;
};

// Record of one CLI invocation, written next to its outputs.
struct RunManifest {
  std::string subcommand;
  std::string tool_version = std::string(kToolVersion);
  std::uint64_t seed = 0;
  std::string config_digest;
  std::vector<ManifestFile> inputs;
  std::vector<ManifestFile> outputs;
  std::string started_at;  // UTC, ISO 8601
  double seconds = 0.0;

  void add_input(std::string role, const std::filesystem::path &path);
  void add_output(std::string role, const std::filesystem::path &path);
};

void write_manifest(const RunManifest &manifest,
                    const std::filesystem::path &path);
RunManifest read_manifest(const std::filesystem::path &path);

// Paths whose current digest differs from the recorded one (or that no
// longer exist).
std::vector<std::string> verify_manifest(const RunManifest &manifest);

}  // namespace belhd

#endif  // BELHD_MANIFEST_H_
