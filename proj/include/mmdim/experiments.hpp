#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmdim/config.hpp"

namespace mmdim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitIncomplete = 3;
inline constexpr int kExitConfig = 4;

const std::vector<std::string>& experiment_names();

struct ExperimentOutput {
  int exit_code = kExitOk;
  std::string experiment;
  std::string csv;
  std::string json;
  std::string message;  // diagnostic for nonzero exits
};

/// Runs the experiment named by `experiment` in the config. Never throws for
/// library errors: they become exit codes with a JSON summary describing the
/// failure (budget and numerical trouble -> incomplete, bad input -> config).
ExperimentOutput run_experiment(const Config& cfg, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Writes <out_dir>/<experiment>.csv and <out_dir>/<experiment>.json.
void write_outputs(const ExperimentOutput& out, const std::string& out_dir);

}  // namespace mmdim
