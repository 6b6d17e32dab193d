#ifndef CHEMLV_IO_HPP
#define CHEMLV_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "chemlv/config.hpp"
#include "chemlv/diagnostics.hpp"
#include "chemlv/stepper.hpp"

namespace chemlv {

/// Series CSV with the documented column order. Reruns of the same config
/// and seed reproduce these bytes exactly.
/// Columns: t, mass_u, mass_v, mass_uv, mass_inv_p, min_w, energy,
///          l2_u, l2_v, linf_u, linf_v, linf_w
std::string series_csv(const Trajectory& records, const std::string& hash,
                       std::uint64_t seed);

/// Field CSV, one row per cell: coordinates then value.
std::string field_csv(const Field& f);

/// Snapshot CSV, one row per cell: coordinates, u, v, w.
std::string snapshot_csv(const State& s);

/// Checkpoint with hex-float payload so resume is bit-exact: header
/// (params, grid, t, step and record counters, config hash, seed) plus the
/// three fields.
std::string checkpoint_text(const ModelParams& p, const Grid& g, const State& s,
                            long step, long records_emitted,
                            const std::string& hash, std::uint64_t seed);

struct Checkpoint {
    ModelParams params;
    Grid grid;
    State state;
    long step = 0;
    long records_emitted = 0;
    std::string hash;
    std::uint64_t seed = 0;
};

Checkpoint parse_checkpoint(const std::string& text);

/// Static SVG line chart. One polyline per series; log10 y-axis optional
/// (non-positive values are dropped there).
struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<ChartSeries>& series, bool log_y);

/// Summary JSON for a finished run (classification, mode, final distances,
/// eps_hat, inequality and bounds reports, constants echo, hash, seed).
std::string summary_json(const RunConfig& cfg, const RunResult& result,
                         const InequalityReport& ineq, const BoundsReport& bounds,
                         const ConditionReport& conditions,
                         const std::string& hash);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace chemlv

#endif
