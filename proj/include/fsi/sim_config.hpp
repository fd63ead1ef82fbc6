#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsi/splitting_driver.hpp"

namespace fsi {

/// Full run description: driver controls plus the initial-data preset and
/// output plumbing. Parsed from plain `key = value` text with '#' comments.
struct SimConfig {
    DriverParams driver;

    // Initial-data preset: zero | single_mode | random_bandlimited |
    // contact_drive, with the parameters each one reads.
    std::string preset = "zero";
    int mode_kx = 1, mode_ky = 0;  // single_mode wavevector
    int component = 2;             // single_mode displacement component
    double amplitude = 0.05;       // single_mode / random_bandlimited scale
    std::uint64_t seed = 1;        // random_bandlimited
    int kmax = 3;                  // random_bandlimited band limit
    double v_z = -2.0;             // contact_drive interface speed scale

    std::string output_dir = "out";
    int snapshot_stride = 0;  // 0 disables snapshots

    bool operator==(const SimConfig& o) const;
};

struct ConfigViolation {
    int line = 0;  // 1-based; 0 for file-level or cross-field violations
    std::string message;
};

/// Outcome of parsing: every violation is collected (unknown keys, duplicate
/// keys with both line numbers, unparsable values, range breaches), not just
/// the first one. The config is only meaningful when ok().
struct ConfigParseResult {
    SimConfig config;
    std::vector<ConfigViolation> violations;
    bool ok() const { return violations.empty(); }
};

ConfigParseResult parse_config(const std::string& text);

/// Fixed-order serialization; re-parsing reproduces the config exactly
/// (doubles are printed with round-trip precision).
std::string serialize_config(const SimConfig& c);

/// Materialize the preset on the configured grid.
InitialData build_initial_data(const SimConfig& c);

}  // namespace fsi
