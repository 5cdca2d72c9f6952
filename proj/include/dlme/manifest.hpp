#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace dlme {

// Provenance record written next to every command's outputs. Re-running the
// recorded command with the recorded config reproduces the outputs
// byte-for-byte.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string git_describe;
  double wall_ms = 0.0;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Atomic write: temp file in the same directory, then rename.
void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

}  // namespace dlme
