#pragma once

#include <filesystem>
#include <string>

#include "cqbm/units.hpp"

namespace cqbm {

/// Parses a JSON config. Nested objects and flat dotted keys ("osc1.mass") are equivalent.
/// Relative samples_csv paths resolve against base_dir.
SystemConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
SystemConfig load_config(const std::filesystem::path& path);

/// Flat-key JSON text for a config (sampled forces are written inline).
std::string dump_config(const SystemConfig& cfg);

}  // namespace cqbm
