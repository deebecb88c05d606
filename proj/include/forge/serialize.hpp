#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "forge/types.hpp"

namespace forge::io {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

// Pulse codecs. Field names and units are documented in SCHEMA.md; floats
// survive a write/read round trip bitwise.
nlohmann::json to_json(const Pulse& pulse);
nlohmann::json to_json(const EffectiveVdwControls& controls);
nlohmann::json to_json(const BaselinePulse& pulse);
Pulse pulse_from_json(const nlohmann::json& j);
EffectiveVdwControls effective_from_json(const nlohmann::json& j);
BaselinePulse baseline_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void write_pulse(const std::filesystem::path& path, const Pulse& pulse);
Pulse read_pulse(const std::filesystem::path& path);

/// UTC ISO-8601 timestamp; honors SOURCE_DATE_EPOCH so records can be made
/// bitwise reproducible.
std::string utc_timestamp();

}  // namespace forge::io
