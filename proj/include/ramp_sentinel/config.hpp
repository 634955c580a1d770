#pragma once
// Strict INI-style configuration: sections [solver] [plant] [noise]
// [metering] [harness], `key = value` lines, full-line comments with '#' or
// ';'. Unknown sections or keys are errors. An empty file yields the
// defaults baked into the structs.

#include "ramp_sentinel/harness.hpp"
#include "ramp_sentinel/sdp.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace ramp {

struct AppConfig {
    SolveOptions solver;
    ScenarioConfig scenario;
    SweepGrid sweep;

    friend bool operator==(const AppConfig&, const AppConfig&) = default;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line_number = 0)
        : std::runtime_error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + what
                                             : what),
          line(line_number) {}
    int line;
};

// Parse and validate. Throws ConfigError naming the offending line or field.
[[nodiscard]] AppConfig parse_config(std::string_view text);

// Canonical emission of every key; parse_config(emit_config(c)) == c.
// Seed lists are emitted as seed_count and seed_base, so a list that is not
// a contiguous run collapses to one on the round trip.
[[nodiscard]] std::string emit_config(const AppConfig& config);

// Apply one `section.key=value` override (extra leading components are
// ignored, so `plant.noise.flow_bound` addresses [noise] flow_bound).
// Callers should re-validate afterwards.
void apply_override(AppConfig& config, std::string_view dotted_key, std::string_view value);

// Field-level validation shared by parse_config and the override path.
void validate_config(const AppConfig& config);

} // namespace ramp
