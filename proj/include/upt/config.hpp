#pragma once

// JSON experiment configuration. Unknown keys are rejected at every level.
// A "preset" key, when present, supplies defaults that the other keys override.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "upt/experiment.hpp"

namespace upt {

ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& source_name = "config");
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// FNV-1a of the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace upt
