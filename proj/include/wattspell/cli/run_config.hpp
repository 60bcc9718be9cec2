#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wattspell/core/error.hpp"
#include "wattspell/data/pipeline.hpp"
#include "wattspell/model/config.hpp"

namespace wspl {

inline constexpr const char* kToolkitVersion = "0.3.0";

/// Bad or unknown configuration keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A referenced input that does not exist or cannot be read.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Everything a run needs. Keys in the JSON file are flat and mirror these
/// fields; ModelConfig keys sit at the same level.
struct RunConfig {
  ModelConfig model;
  std::string data_dir;  // REDD house directory, read by prepare
  std::string scene;     // scene CSV, read by train
  std::string out_dir = "run";
  std::vector<std::string> appliances;  // labels to extract; empty means the standard six
  double split_ratio = 0.8;
  DownsampleMethod downsample = DownsampleMethod::Mean;
  std::size_t downsample_factor = 10;
  std::int64_t raw_period_s = 1;
  std::size_t train_stride = 4;
  std::size_t val_stride = 1;
  std::size_t threads = 1;

  void validate() const;
};

/// Strict: unknown keys and type mismatches raise ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

DownsampleMethod parse_downsample(const std::string& name);
const char* downsample_name(DownsampleMethod method);

/// Throws InputError naming the path when it is not an existing file or directory.
void require_file(const std::filesystem::path& path, const char* what);
void require_directory(const std::filesystem::path& path, const char* what);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace wspl
