#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gem/driver.hpp"

namespace gem::report {

inline constexpr const char* kTimeseriesHeader = "t,x_tip,v_tip,node_count,ms_per_step";
inline constexpr const char* kEnvelopeHeader = "t,node,x,y";

/// envelope_<t>.csv with t in shortest decimal form.
std::string envelope_file_name(double t);

void write_timeseries(const std::filesystem::path& path, const std::vector<driver::TimeSeriesRecord>& records);
void write_envelope(const std::filesystem::path& path, const driver::Snapshot& snapshot);

std::vector<driver::TimeSeriesRecord> read_timeseries(const std::filesystem::path& path);
driver::Snapshot read_envelope(const std::filesystem::path& path);

/// v_tip against x_tip, one polyline per run, with a legend.
std::string tip_velocity_svg(const std::vector<driver::RunArtifacts>& runs);
/// Envelope shapes of every snapshot of every run, overlaid.
std::string envelopes_svg(const std::vector<driver::RunArtifacts>& runs);

/// Writes <out>/<solver>/timeseries.csv, <out>/<solver>/envelope_<t>.csv,
/// <out>/tip_velocity.svg and <out>/envelopes.svg. Throws IoError.
void emit_report(const std::vector<driver::RunArtifacts>& runs, const std::filesystem::path& out);

/// Reads back whatever solver directories exist under `out` and rewrites both SVGs.
std::vector<driver::RunArtifacts> load_runs(const std::filesystem::path& out);
void regenerate_svgs(const std::filesystem::path& out);

}  // namespace gem::report
