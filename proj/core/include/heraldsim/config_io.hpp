#pragma once

#include <iosfwd>
#include <string>

#include "heraldsim/config.hpp"

namespace heraldsim {

/// Desk-scale profile: the full-rate setup with the pair rate reduced an
/// order of magnitude so a full 3000-trial run takes seconds.
ExperimentConfig desk_profile();

/// Full-rate profile ("paper"): pair rate back-solved so the detected idler
/// rate at transmission 1 lands near 14k counts/s.
ExperimentConfig paper_profile();

/// Parses the canonical `key = value` config document (see README for the
/// schema). Keys not present keep their desk-profile defaults; unknown or
/// duplicate keys are an error. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Serializes every key in canonical order; parse(serialize(c)) == c.
/// master_seed is omitted when unset.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace heraldsim
