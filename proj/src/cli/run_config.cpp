#include "wattspell/cli/run_config.hpp"

#include <cstdio>
#include <fstream>

namespace wspl {

namespace {

template <typename T>
void take(nlohmann::json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw ConfigError(std::string("config key '") + key + "' expects a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ConfigError(std::string("config key '") + key + "' expects a number");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) throw ConfigError(std::string("config key '") + key + "' expects a non-negative integer");
  } else {
    if (!it->is_number_integer()) throw ConfigError(std::string("config key '") + key + "' expects an integer");
  }
  field = it->get<T>();
  j.erase(it);
}

}  // namespace

DownsampleMethod parse_downsample(const std::string& name) {
  if (name == "mean") return DownsampleMethod::Mean;
  if (name == "decimate") return DownsampleMethod::Decimate;
  throw ConfigError("downsample must be 'mean' or 'decimate', got '" + name + "'");
}

const char* downsample_name(DownsampleMethod method) { return method == DownsampleMethod::Mean ? "mean" : "decimate"; }

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("config: split_ratio must lie in (0, 1)");
  if (downsample_factor == 0) throw ConfigError("config: downsample_factor must be positive");
  if (raw_period_s <= 0) throw ConfigError("config: raw_period_s must be positive");
  if (train_stride == 0 || val_stride == 0) throw ConfigError("config: window strides must be positive");
  if (threads == 0) throw ConfigError("config: threads must be positive");
  if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

RunConfig run_config_from_json(const nlohmann::json& input) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  nlohmann::json j = input;
  RunConfig c;
  try {
    apply_model_keys(j, c.model);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  take(j, "data_dir", c.data_dir);
  take(j, "scene", c.scene);
  take(j, "out_dir", c.out_dir);
  take(j, "split_ratio", c.split_ratio);
  take(j, "downsample_factor", c.downsample_factor);
  take(j, "raw_period_s", c.raw_period_s);
  take(j, "train_stride", c.train_stride);
  take(j, "val_stride", c.val_stride);
  take(j, "threads", c.threads);
  if (auto it = j.find("downsample"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("config key 'downsample' expects a string");
    c.downsample = parse_downsample(it->get<std::string>());
    j.erase(it);
  }
  if (auto it = j.find("appliances"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("config key 'appliances' expects an array of strings");
    for (const auto& v : *it) {
      if (!v.is_string()) throw ConfigError("config key 'appliances' expects an array of strings");
      c.appliances.push_back(v.get<std::string>());
    }
    j.erase(it);
  }
  if (!j.empty()) throw ConfigError("unknown config key '" + j.begin().key() + "'");
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  require_file(path, "config file");
  std::ifstream in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = to_json(c.model);
  j["data_dir"] = c.data_dir;
  j["scene"] = c.scene;
  j["out_dir"] = c.out_dir;
  j["appliances"] = c.appliances;
  j["split_ratio"] = c.split_ratio;
  j["downsample"] = downsample_name(c.downsample);
  j["downsample_factor"] = c.downsample_factor;
  j["raw_period_s"] = c.raw_period_s;
  j["train_stride"] = c.train_stride;
  j["val_stride"] = c.val_stride;
  j["threads"] = c.threads;
  return j;
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (path.empty()) throw InputError(std::string(what) + " not set");
  if (!std::filesystem::is_regular_file(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

void require_directory(const std::filesystem::path& path, const char* what) {
  if (path.empty()) throw InputError(std::string(what) + " not set");
  if (!std::filesystem::is_directory(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace wspl
