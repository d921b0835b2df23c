#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ecoepi/integrator.hpp"
#include "ecoepi/model.hpp"

namespace ecoepi {

/// Contents of a run file:
///
///     [parameters]
///     s = 0.4
///     ...
///     [initial]
///     P0 = 0.0
///     [integration]
///     rel_tol = 1e-8
///
/// '#' and ';' start comments. Every parameter key is required; [initial]
/// and [integration] entries default to zero and IntegrationConfig{}.
struct RunConfig {
    Parameters parameters;
    State initial;
    IntegrationConfig integration;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError carrying the offending line number.
[[nodiscard]] RunConfig parse_config(std::string_view text);
/// Throws IoError when unreadable, ConfigError on bad content.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
/// Shortest round-trip representation of every value.
[[nodiscard]] std::string dump_config(const RunConfig& cfg);

} // namespace ecoepi
