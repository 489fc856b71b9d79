#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace udesign {

using json = nlohmann::json;

// Source-tree root (compile-time default, UDESIGN_ROOT env override) and the
// conventional location of checked-in regression fixtures.
std::string source_root();
std::string fixture_path(const std::string& name);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j, int indent = 2);

// FNV-1a of a file's bytes, as "fnv1a:<16 hex digits>"; reports embed the
// hash of the fixture file their golden comparisons used.
std::string file_hash(const std::string& path);

// One verified quantity in a run report.
struct CheckEntry {
  std::string id;      // stable slug, e.g. "haar-moment-mc-d3-t2"
  std::string detail;  // what identity/bound is being checked
  int criterion = 0;   // acceptance-manifest number (1-11), 0 = not mapped
  double value = 0.0;
  std::optional<double> bound;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
};

struct Report {
  int schema_version = 1;
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string fixture_hash;
  std::vector<CheckEntry> checks;

  bool pass() const;
  // include_timing=false drops per-check and total wall times plus the
  // timestamp, leaving only fields that must be byte-identical across runs
  // with the same config.
  json to_json(bool include_timing = true) const;
};

}  // namespace udesign
