#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "intricacy/harness/output.hpp"

namespace intricacy::harness {

const char* tool_version() { return INTRICACY_VERSION; }

void RunManifest::write(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["tool"] = "intricacy";
  j["version"] = tool_version();
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config) {
    const auto dot = key.find('.');
    cfg[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  j["config"] = cfg;
  j["corrections"] = flags;
  j["metrics"] = metrics;
  j["outputs"] = outputs;
  j["wall_seconds"] = wall_seconds;
  j["exit_code"] = exit_code;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace intricacy::harness
