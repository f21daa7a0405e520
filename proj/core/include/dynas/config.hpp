#pragma once

#include "dynas/optimizer.hpp"
#include "dynas/warmstart.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace dynas {

/// Hyperparameter and warm-start settings shared by every run of an experiment.
struct HarnessSettings {
    /// Parameter blocks for all algorithms; `algorithm` and `rng_seed` are
    /// filled in per run.
    OptimizerConfig optimizers;
    WarmStartPolicy policy;
};

/// Applies a JSON object of the form
///   {"bfgs": {...}, "cmaes": {...}, "pso": {...}, "de": {...}, "mlsl": {...},
///    "warmstart": {"mode": "full", "step_size_window": 10, ...}}
/// on top of `settings`. Unknown keys and wrong types throw ConfigError.
void apply_settings_json(HarnessSettings& settings, std::string_view json_text);
HarnessSettings load_settings(const std::filesystem::path& path);

/// The settings as JSON, in the format accepted above.
std::string settings_to_json(const HarnessSettings& settings);

}  // namespace dynas
