#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gem/config.hpp"
#include "gem/geometry.hpp"

namespace gem::driver {

struct TimeSeriesRecord {
    double t = 0.0;
    double x_tip = 0.0;
    double v_tip = 0.0;
    std::size_t node_count = 0;
    double ms_per_step = 0.0;
};

struct Snapshot {
    double t = 0.0;
    std::vector<Vec2> polyline;
};

struct RunArtifacts {
    std::string solver;  // "sharp" or "diffuse"
    std::vector<TimeSeriesRecord> records;
    std::vector<Snapshot> snapshots;
    long long steps = 0;
};

struct RunOptions {
    /// Replaces the kinetics law; receives the clamped probe value.
    std::function<double(double)> speed_override;
    /// Called after every step with (step, t).
    std::function<void(long long, double)> progress;
    /// Checked after every record; returning true ends the run there.
    std::function<bool(const TimeSeriesRecord&)> stop;
    /// Where a failing run leaves its last state; empty disables the dump.
    std::string dump_dir;
};

/// Meshless sharp-interface time loop.
RunArtifacts run_sharp(const SimConfig& config, const RunOptions& options = {});

/// Fixed-grid diffuse-interface time loop with the same record schema.
RunArtifacts run_diffuse(const SimConfig& config, const RunOptions& options = {});

/// Runs the solvers selected by config.solver, sharp first.
std::vector<RunArtifacts> run(const SimConfig& config, const RunOptions& options = {});

}  // namespace gem::driver
