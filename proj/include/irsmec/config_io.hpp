#pragma once

#include <string>

#include <json.hpp>

#include "irsmec/experiment.hpp"

namespace irsmec {

/// Reads an experiment document. Top-level sections are "system",
/// "solver" and "experiment"; every key is optional and falls back to the
/// defaults. Power-like quantities are given in dBm/dB (noise_dbm,
/// power_cap_dbm, circuit_power_dbm, reference_gain_db). Unknown keys,
/// type mismatches and invalid values are all reported together through
/// ConfigError.
ExperimentSpec spec_from_json(const nlohmann::json& doc);
ExperimentSpec load_spec(const std::string& path);

/// Inverse of spec_from_json; round-trips through it.
nlohmann::json spec_to_json(const ExperimentSpec& spec);

}  // namespace irsmec
