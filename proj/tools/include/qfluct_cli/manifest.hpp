#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qfluct::cli {

/// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

struct OutputFile {
  std::filesystem::path path;
  std::string sha256;
};

/// Provenance record written next to every file output:
/// {version, command, config{...}, seed, outputs[{path, sha256}], started_at, finished_at}.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<OutputFile> outputs;
  std::string started_at;
  std::string finished_at;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// UTC timestamp, ISO 8601.
std::string utc_now();

}  // namespace qfluct::cli
