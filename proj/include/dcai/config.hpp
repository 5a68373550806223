// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "dcai/simulation.hpp"

namespace dcai {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Returns the value of an environment variable, or nothing.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// INI-style config. Sections: [simulation], [model], [dataset], [trainer],
/// [agent.good], [agent.bad]. Amounts are in balance units and may carry up
/// to six decimals. Unknown sections or keys are errors.
///
/// Each key can be overridden by `DCAI_<SECTION>_<KEY>` in upper case with
/// dots replaced by underscores, e.g. DCAI_AGENT_BAD_STARTING_BALANCE.
SimulationConfig parse_config(std::istream& in, const EnvLookup& env = process_env);
SimulationConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env);
/// Defaults plus environment overrides.
SimulationConfig default_config(const EnvLookup& env = process_env);

/// Writes every field in the format parse_config reads.
void write_config(const SimulationConfig& config, std::ostream& out);

/// "12.5" -> 12'500'000 micro-units. Throws ConfigError on malformed text.
Amount parse_units(const std::string& text);
std::string format_units(Amount micros);

}  // namespace dcai
