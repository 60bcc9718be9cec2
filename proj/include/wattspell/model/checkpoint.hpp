#pragma once

#include <cstdint>
#include <filesystem>

#include "wattspell/model/config.hpp"
#include "wattspell/model/params.hpp"

namespace wspl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  ModelConfig config;
};

/// Little-endian layout: "WSPL", u32 version, u32-length-prefixed canonical
/// config text, then per tensor block a u32-length-prefixed name, u32 rank,
/// u64 dims and the raw IEEE-754 doubles.
void checkpoint_save(const ModelParams& params, const ModelConfig& config, const std::filesystem::path& path);

/// Raises CheckpointFormatError (bad magic, unknown block),
/// CheckpointVersionError, CheckpointTruncatedError or CheckpointShapeError
/// (a block disagrees with the embedded config; the message names the block).
Checkpoint checkpoint_load(const std::filesystem::path& path);

/// As above, then requires the parameters to fit `expected`; a mismatch
/// raises CheckpointShapeError naming the first incompatible block.
Checkpoint checkpoint_load(const std::filesystem::path& path, const ModelConfig& expected);

}  // namespace wspl
