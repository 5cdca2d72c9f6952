#include "dlme/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "dlme/error.hpp"

namespace dlme {

using nlohmann::json;

json RunManifest::to_json() const {
  json j;
  j["schema"] = "dlme-run-manifest/1";
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["git_describe"] = git_describe;
  j["wall_ms"] = wall_ms;
  j["outputs"] = outputs;
  return j;
}

RunManifest RunManifest::from_json(const json& j) {
  if (j.value("schema", "") != "dlme-run-manifest/1") {
    throw ParseError("unrecognized manifest schema");
  }
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config = j.at("config");
  m.seed = j.value("seed", 0ULL);
  m.git_describe = j.value("git_describe", "unknown");
  m.wall_ms = j.value("wall_ms", 0.0);
  m.outputs = j.value("outputs", std::vector<std::string>{});
  return m;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot open manifest for writing: " + tmp);
    out << m.to_json().dump(1) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw ConfigError("cannot move manifest into place: " + path);
  }
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("manifest is not valid JSON: " + std::string(e.what()));
  }
  return RunManifest::from_json(j);
}

}  // namespace dlme
