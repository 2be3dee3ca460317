#pragma once

#include "pxbar/ann.hpp"
#include "pxbar/crossbar.hpp"
#include "pxbar/device.hpp"
#include "pxbar/materials.hpp"
#include "pxbar/optics.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pxbar {

using Json = nlohmann::json;

struct ArrayConfig {
  std::size_t rows = 1;
  std::size_t cols = 1;
  double r_row_ohm = 0.0;
  double r_col_ohm = 0.0;
  double initial_s = 0.0;
};

struct ProgrammingConfig {
  double tol = 0.01;
  std::size_t max_pulses = 64;
  ProgramOptions options;
};

struct MemoryDemoConfig {
  int writes = 20;
  double write_duration_s = 0.0;  // 0: tau_set / writes
  bool erase = true;
  Domain domain = Domain::Electrical;
};

// Everything a CLI experiment needs, resolved from one JSON file plus
// overrides. Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::filesystem::path source;
  std::shared_ptr<const MaterialRecord> material;  // null if the file has no material block
  DeviceParams device;
  WaveguideCellGeometry geometry;
  ArrayConfig array;
  ReadSettings read;
  ProgrammingConfig programming;
  MemoryDemoConfig memory_demo;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  Json effective;  // merged document the fields above were read from

  // SHA-256 of the effective document without output_dir.
  std::string hash() const;

  CrossbarArray make_array() const;
};

// Applies "a.b.c=value" overrides. The value is parsed as JSON when it is
// valid JSON, otherwise stored as a string.
void apply_override(Json& doc, const std::string& assignment);

std::map<Technology, DeviceParams> load_technology_defaults(const std::filesystem::path& path);

// Reads the device block. Keys missing from the block come from `base`;
// without a base every key is required.
DeviceParams device_params_from_json(const Json& block, const DeviceParams* base = nullptr);

WaveguideCellGeometry geometry_from_json(const Json& block);

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});
ExperimentConfig config_from_json(Json doc, const std::filesystem::path& base_dir);

std::string sha256_hex(const std::string& bytes);

}  // namespace pxbar
