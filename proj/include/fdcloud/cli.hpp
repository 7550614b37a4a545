#pragma once

// Command-line front end. Subcommands: mass-curve, phase, multiplicity,
// converge, crosscheck. Settings come from defaults, then an optional
// --config file (key=value lines or JSON), then command-line flags; the
// effective settings are echoed under "config" in every JSON artifact, and
// such an artifact can itself be passed back with --config.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "fdcloud/numerics.hpp"

#include <json.hpp>

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace fdcloud {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string kind = "mb";
    int d = 3;
    double eta = 0.0;  // defaults to 1e-3 for Fermi-Dirac kinds when not given
    double rho = 1.0;
    double rho_min = 1e-2;
    double rho_max = 1e8;
    int points_per_decade = 16;
    double mass = 0.0;  // 0: not given (multiplicity defaults to 2 sigma_d)
    double s_end = 0.0; // phase: defaults to s_start + 50
    std::vector<double> etas{1e-2, 1e-3, 1e-4};
    std::string format;
    std::string out;
    unsigned threads = 0;
    NumericsConfig numerics;
};

// Builds the effective config for `command` from raw key/value settings
// (config-file keys and long flag names coincide, e.g. "rho-min"). Throws
// ConfigError or DomainError on invalid input.
RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& raw);

// Reads a key=value or JSON config file into raw settings. A JSON document
// with a "config" member (such as any artifact written by this tool) is read
// from that member.
std::map<std::string, std::string> read_config_file(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);

// argv-style entry point; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fdcloud
