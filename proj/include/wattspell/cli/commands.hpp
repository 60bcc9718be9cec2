#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wattspell/cli/run_config.hpp"
#include "wattspell/data/redd.hpp"
#include "wattspell/data/scene_csv.hpp"
#include "wattspell/data/windows.hpp"
#include "wattspell/eval/metrics.hpp"

namespace wspl {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitDiverged = 3 };

/// Runs one subcommand. args excludes the program name. Results go to
/// files and `out`; diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

/// Mains channels summed into the aggregate, same-label channels summed per
/// appliance, everything aligned on the raw grid and then downsampled.
/// Requested labels absent from the house are skipped with a note on `log`.
Scene scene_from_house(const HouseData& house, const RunConfig& config, std::ostream& log);

/// Chronological split of a scene into normalized windows. Statistics come
/// from the training side only.
struct PreparedWindows {
  WindowBatch train;  // train side, config.train_stride
  WindowBatch val;    // test side, config.val_stride
  WindowBatch test;   // test side, every window
  NormStats aggregate_stats;
  std::vector<NormStats> appliance_stats;
  std::vector<std::string> names;
};

PreparedWindows prepare_windows(const Scene& scene, const RunConfig& config);

}  // namespace wspl
