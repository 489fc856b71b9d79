#include "udesign/report.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "udesign/linalg.hpp"

#ifndef UDESIGN_SOURCE_ROOT
#define UDESIGN_SOURCE_ROOT "."
#endif

namespace udesign {

std::string source_root() {
  if (const char* env = std::getenv("UDESIGN_ROOT"); env && *env) return env;
  return UDESIGN_SOURCE_ROOT;
}

std::string fixture_path(const std::string& name) {
  return source_root() + "/fixtures/" + name;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_json: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("load_json: " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j, int indent) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_json: cannot open " + path);
  out << j.dump(indent) << '\n';
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file_hash: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json Report::to_json(bool include_timing) const {
  json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["threads"] = threads;
  if (!fixture_hash.empty()) j["fixture_hash"] = fixture_hash;
  json arr = json::array();
  double total_ms = 0.0;
  for (const auto& c : checks) {
    json e;
    e["id"] = c.id;
    e["detail"] = c.detail;
    if (c.criterion > 0) e["criterion"] = c.criterion;
    e["value"] = c.value;
    if (c.bound) e["bound"] = *c.bound;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (include_timing) e["wall_ms"] = c.wall_ms;
    total_ms += c.wall_ms;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  j["pass"] = pass();
  if (include_timing) {
    j["total_wall_ms"] = total_ms;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
            .count();
  }
  return j;
}

}  // namespace udesign
