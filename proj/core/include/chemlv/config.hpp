#ifndef CHEMLV_CONFIG_HPP
#define CHEMLV_CONFIG_HPP

#include <cstdint>
#include <string>

#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"
#include "chemlv/stepper.hpp"

namespace chemlv {

struct SweepSpec {
    int k = 8;  ///< K x K grid of (chi1, chi2) cells (capped at 64)
    double chi1_min = 0.01, chi1_max = 1.0;
    double chi2_min = 0.01, chi2_max = 1.0;
    bool simulate = true;  ///< also run each cell, not just the condition checks
};

struct OutputFlags {
    bool series_csv = true;
    bool summary_json = true;
    bool snapshots = false;
    bool svg = false;
};

/// Full description of one run: model parameters, domain, stepping, initial
/// condition, outputs. Parsed from dotted key = value text or from JSON.
struct RunConfig {
    ModelParams params;
    int dimension = 1;
    int nx = 128, ny = 32;
    double lx = 1.0, ly = 1.0;
    StepperConfig stepper;
    OutputFlags output;
    SweepSpec sweep;
    std::string out_dir = ".";
    int threads = 1;

    Grid make_grid() const;
};

/// Parses a config file. JSON is detected by a leading '{' or a .json
/// extension; anything else is read as `section.key = value` lines with
/// '#' comments. Throws ConfigError naming the offending field.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, bool is_json);

/// Canonical key = value rendering (sorted keys, %.17g floats). Hashing this
/// makes the hash independent of input format and key order.
std::string canonical_config_text(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace chemlv

#endif
