#include "pxbar/config.hpp"

#include "pxbar/errors.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pxbar {

namespace fs = std::filesystem;

namespace {

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

template <typename T>
T get(const Json& block, const char* key, const std::string& where) {
  if (!block.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return block.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const Json& block, const char* key, T fallback, const std::string& where) {
  if (!block.contains(key) || block.at(key).is_null()) return fallback;
  return get<T>(block, key, where);
}

std::optional<double> get_opt(const Json& block, const char* key, const std::string& where) {
  if (!block.contains(key) || block.at(key).is_null()) return std::nullopt;
  return get<double>(block, key, where);
}

std::uint64_t get_count(const Json& block, const char* key, const std::string& where) {
  const double v = get<double>(block, key, where);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key.path=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    if (!node->is_object()) throw ConfigError("override '" + assignment + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

DeviceParams device_params_from_json(const Json& block, const DeviceParams* base) {
  const std::string where = "device";
  DeviceParams p;
  if (base) p = *base;
  const auto num = [&](const char* key, double current) {
    return base ? get_or<double>(block, key, current, where) : get<double>(block, key, where);
  };
  if (block.contains("technology")) p.technology = parse_technology(get<std::string>(block, "technology", where));
  else if (!base) throw ConfigError("device: missing key 'technology'");
  p.v_set = num("v_set", p.v_set);
  p.v_reset = num("v_reset", p.v_reset);
  p.p_set = num("p_set_W", p.p_set);
  p.p_reset = num("p_reset_W", p.p_reset);
  p.tau_set = num("tau_set_s", p.tau_set);
  p.g_a = num("g_a_S", p.g_a);
  p.g_c = num("g_c_S", p.g_c);
  p.analog = base ? get_or<bool>(block, "analog", p.analog, where) : get<bool>(block, "analog", where);
  if (block.contains("n_endurance")) p.n_endurance = get_count(block, "n_endurance", where);
  else if (!base) throw ConfigError("device: missing key 'n_endurance'");
  p.drift_nu = get_or<double>(block, "drift_nu", p.drift_nu, where);
  p.hrs_max_s = get_or<double>(block, "hrs_max_s", p.hrs_max_s, where);
  p.lrs_min_s = get_or<double>(block, "lrs_min_s", p.lrs_min_s, where);
  try {
    p.validate();
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  return p;
}

std::map<Technology, DeviceParams> load_technology_defaults(const fs::path& path) {
  const Json doc = read_json(path);
  std::map<Technology, DeviceParams> out;
  for (const auto& [name, block] : doc.items()) {
    if (!name.empty() && name.front() == '_') continue;  // "_comment" and friends
    Json b = block;
    b["technology"] = name;
    out.emplace(parse_technology(name), device_params_from_json(b));
  }
  return out;
}

WaveguideCellGeometry geometry_from_json(const Json& block) {
  const std::string where = "geometry";
  WaveguideCellGeometry g;
  g.length_m = get<double>(block, "length_um", where) * 1e-6;
  g.wavelength_nm = get<double>(block, "wavelength_nm", where);
  g.gamma = get<double>(block, "gamma", where);
  g.fill = get<double>(block, "fill", where);
  g.pcm_side = parse_pcm_side(get<std::string>(block, "pcm_side", where));
  g.alpha_min = get<double>(block, "alpha_min_per_m", where);
  g.c2 = get<double>(block, "c2_per_m_riu2", where);
  g.n_mode0 = get<double>(block, "n_mode0", where);
  try {
    g.validate();
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
  return g;
}

ExperimentConfig config_from_json(Json doc, const fs::path& base_dir) {
  ExperimentConfig cfg;
  cfg.seed = get_count(doc, "seed", "config");
  cfg.output_dir = get_or<std::string>(doc, "output_dir", "out", "config");

  if (doc.contains("material")) {
    const auto& m = doc["material"];
    const auto path = resolve(base_dir, get<std::string>(m, "path", "material"));
    try {
      cfg.material = std::make_shared<const MaterialRecord>(
          load_material(path.string(), get<double>(m, "g_amorphous_S", "material"),
                        get<double>(m, "g_crystalline_S", "material")));
    } catch (const ParseError& e) {
      throw ConfigError(std::string("material: ") + e.what());
    } catch (const InvariantError& e) {
      throw ConfigError(std::string("material: ") + e.what());
    }
  }

  if (!doc.contains("device")) throw ConfigError("config: missing block 'device'");
  const Json& dev = doc["device"];
  std::optional<DeviceParams> base;
  if (doc.contains("technology_defaults")) {
    const auto defaults = load_technology_defaults(
        resolve(base_dir, get<std::string>(doc, "technology_defaults", "config")));
    const auto tech = parse_technology(get<std::string>(dev, "technology", "device"));
    const auto it = defaults.find(tech);
    if (it == defaults.end()) throw ConfigError("technology defaults lack " + std::string(to_string(tech)));
    base = it->second;
  }
  if (base && cfg.material) {
    // Material endpoints refine the technology defaults; explicit device keys win.
    base->g_a = cfg.material->g_amorphous;
    base->g_c = cfg.material->g_crystalline;
  }
  cfg.device = device_params_from_json(dev, base ? &*base : nullptr);

  if (doc.contains("geometry")) cfg.geometry = geometry_from_json(doc["geometry"]);

  if (doc.contains("array")) {
    const auto& a = doc["array"];
    cfg.array.rows = get_count(a, "rows", "array");
    cfg.array.cols = get_count(a, "cols", "array");
    cfg.array.r_row_ohm = get_or<double>(a, "r_row_ohm", 0.0, "array");
    cfg.array.r_col_ohm = get_or<double>(a, "r_col_ohm", 0.0, "array");
    cfg.array.initial_s = get_or<double>(a, "initial_s", 0.0, "array");
    if (cfg.array.rows == 0 || cfg.array.cols == 0) throw ConfigError("array: rows and cols must be > 0");
    if (!(cfg.array.initial_s >= 0.0 && cfg.array.initial_s <= 1.0)) {
      throw ConfigError("array.initial_s must lie in [0,1]");
    }
  }

  if (doc.contains("read")) {
    const auto& r = doc["read"];
    cfg.read.v_read = get_or<double>(r, "v_read", cfg.read.v_read, "read");
    cfg.read.v_scale = get_or<double>(r, "v_scale", cfg.read.v_scale, "read");
    cfg.read.t_read = get_or<double>(r, "t_read_s", cfg.read.t_read, "read");
    if (!(cfg.read.v_read > 0.0) || !(cfg.read.v_scale > 0.0) || !(cfg.read.t_read > 0.0)) {
      throw ConfigError("read: v_read, v_scale and t_read_s must be > 0");
    }
    if (cfg.read.v_read >= cfg.device.v_set || cfg.read.v_read >= cfg.device.v_reset) {
      throw ConfigError("read.v_read must stay below the device switching thresholds");
    }
  }

  if (doc.contains("programming")) {
    const auto& p = doc["programming"];
    cfg.programming.tol = get_or<double>(p, "tol", cfg.programming.tol, "programming");
    if (p.contains("max_pulses")) cfg.programming.max_pulses = get_count(p, "max_pulses", "programming");
    auto& o = cfg.programming.options;
    o.domain = parse_domain(get_or<std::string>(p, "domain", "electrical", "programming"));
    o.write_amplitude = get_opt(p, "write_amplitude", "programming");
    o.reset_amplitude = get_opt(p, "reset_amplitude", "programming");
    o.reset_duration = get_opt(p, "reset_duration_s", "programming");
  }

  if (doc.contains("memory_demo")) {
    const auto& m = doc["memory_demo"];
    cfg.memory_demo.writes = static_cast<int>(get_or<double>(m, "writes", 20, "memory_demo"));
    cfg.memory_demo.write_duration_s = get_or<double>(m, "write_duration_s", 0.0, "memory_demo");
    cfg.memory_demo.erase = get_or<bool>(m, "erase", true, "memory_demo");
    cfg.memory_demo.domain = parse_domain(get_or<std::string>(m, "domain", "electrical", "memory_demo"));
    if (cfg.memory_demo.writes < 0) throw ConfigError("memory_demo.writes must be >= 0");
  }

  cfg.effective = std::move(doc);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  Json doc = read_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  auto cfg = config_from_json(std::move(doc), path.parent_path());
  cfg.source = path;
  return cfg;
}

std::string ExperimentConfig::hash() const {
  Json copy = effective;
  copy.erase("output_dir");
  return sha256_hex(copy.dump());
}

CrossbarArray ExperimentConfig::make_array() const {
  CrossbarArray array(this->array.rows, this->array.cols, device, geometry, material,
                      this->array.r_row_ohm, this->array.r_col_ohm);
  for (std::size_t n = 0; n < array.rows(); ++n)
    for (std::size_t m = 0; m < array.cols(); ++m) {
      auto c = array.cell(n, m);
      c.s = this->array.initial_s;
      array.set_cell(n, m, c);
    }
  return array;
}

}  // namespace pxbar
