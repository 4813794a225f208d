#include "gem/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "gem/diffusion.hpp"
#include "gem/envelope.hpp"
#include "gem/errors.hpp"
#include "gem/format.hpp"
#include "gem/kinetics.hpp"
#include "gem/meshless.hpp"
#include "gem/node_gen.hpp"
#include "gem/pu.hpp"
#include "gem/reference.hpp"
#include "gem/spatial_index.hpp"

namespace gem::driver {

namespace {

using Clock = std::chrono::steady_clock;

/// Everything bound to one node set. Rebuilt as a unit so that a step never
/// pairs nodes with weights, solver or PU geometry of another generation.
struct Discretization {
    NodeSet nodes;
    meshless::WeightStore weights;
    std::unique_ptr<diffusion::DiffusionSolver> solver;
    std::unique_ptr<meshless::PUApproximator> pu;
    std::unique_ptr<GridIndex> index;
    std::vector<std::size_t> envelope_ids;

    Discretization(NodeSet set, const SimConfig& c) : nodes(std::move(set))
    {
        const meshless::WeightOptions wo{c.weight_shape, c.weight_shape};
        weights = meshless::WeightStore(nodes, meshless::find_stencils(nodes, c.support), wo);
        solver = std::make_unique<diffusion::DiffusionSolver>(nodes, weights, c.c_stab);
        pu = std::make_unique<meshless::PUApproximator>(nodes, weights.stencils());
        index = std::make_unique<GridIndex>(std::span<const Vec2>(nodes.positions), c.h_m());
        envelope_ids = nodes.indices_of(NodeKind::envelope);
    }

    void check(const ScalarField& u) const
    {
        if (weights.generation() != nodes.generation || u.generation != nodes.generation)
            throw AlignmentError("driver: field, weights and nodes belong to different generations");
    }
};

/// Regenerates the node set around `curve` and replaces `curve` by the loop
/// through the envelope nodes actually placed, which node generation may
/// have resampled.
Discretization discretize(envelope::EnvelopeCurve& curve, const SimConfig& c)
{
    nodes::DomainSpec spec;
    spec.a_m = c.a_m;
    spec.envelope = curve;
    spec.h_d = c.h_d;
    spec.h_m = c.h_m();
    nodes::FillOptions fo;
    fo.seed = c.seed;
    Discretization d(nodes::generate(spec, fo), c);
    std::vector<Vec2> placed;
    placed.reserve(d.envelope_ids.size());
    for (std::size_t id : d.envelope_ids) placed.push_back(d.nodes.positions[id]);
    curve = envelope::EnvelopeCurve(std::move(placed));
    return d;
}

/// Value of the interpolant at p, falling back to the nearest patch's local
/// fit where p lies outside every (extended) patch.
double evaluate(const meshless::PUInterpolant& interp, const Discretization& d, const Vec2& p)
{
    if (interp.covers(p)) return interp(p);
    const int nearest = d.index->nearest(p);
    return interp.local_value(static_cast<std::size_t>(nearest), p);
}

double probe(const meshless::PUInterpolant& interp, const Discretization& d, const envelope::EnvelopeCurve& curve,
             const SimConfig& c, Vec2 p)
{
    const double half = 0.5 * c.a_m;
    const bool outside = std::abs(p.x()) > half || std::abs(p.y()) > half;
    if (outside && c.probe_policy == ProbePolicy::clamp) {
        p.x() = std::clamp(p.x(), -half, half);
        p.y() = std::clamp(p.y(), -half, half);
    }
    if (curve.contains(p)) return 0.0;
    return evaluate(interp, d, p);
}

struct Recorder {
    const SimConfig& config;
    RunArtifacts& out;
    std::vector<bool> taken;
    Clock::time_point last = Clock::now();
    long long last_step = 0;

    Recorder(const SimConfig& c, RunArtifacts& a) : config(c), out(a), taken(c.snapshots.size(), false) {}

    void snapshots(double t, const std::function<std::vector<Vec2>()>& polyline)
    {
        for (std::size_t k = 0; k < taken.size(); ++k)
            if (!taken[k] && t >= config.snapshots[k] - 0.5 * config.dt) {
                taken[k] = true;
                out.snapshots.push_back({config.snapshots[k], polyline()});
            }
    }

    [[nodiscard]] bool due(long long step, long long total) const
    {
        return step == 1 || step % config.record_interval == 0 || step == total;
    }

    void record(long long step, double t, double x_tip, double v_tip, std::size_t count)
    {
        const auto now = Clock::now();
        double ms = 0.0;
        if (config.timing && step > last_step)
            ms = std::chrono::duration<double, std::milli>(now - last).count() / static_cast<double>(step - last_step);
        out.records.push_back({t, x_tip, v_tip, count, ms});
        last = now;
        last_step = step;
    }
};

void dump_sharp(const RunOptions& o, const envelope::EnvelopeCurve& curve, const Discretization& d,
                const ScalarField& u, long long step)
{
    if (o.dump_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(o.dump_dir, ec);
    std::ofstream env(std::filesystem::path(o.dump_dir) / "sharp_failure_envelope.csv");
    env << "step,node,x,y\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        env << step << ',' << i << ',' << format::number(curve.nodes()[i].x()) << ','
            << format::number(curve.nodes()[i].y()) << '\n';
    std::ofstream field(std::filesystem::path(o.dump_dir) / "sharp_failure_field.csv");
    field << "node,kind,x,y,u\n";
    for (std::size_t i = 0; i < d.nodes.size() && i < u.size(); ++i)
        field << i << ',' << static_cast<int>(d.nodes.kinds[i]) << ',' << format::number(d.nodes.positions[i].x())
              << ',' << format::number(d.nodes.positions[i].y()) << ',' << format::number(u[i]) << '\n';
}

void dump_diffuse(const RunOptions& o, const reference::PhaseGrid& g, long long step)
{
    if (o.dump_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(o.dump_dir, ec);
    std::ofstream field(std::filesystem::path(o.dump_dir) / "diffuse_failure_field.csv");
    field << "step,i,j,alpha,u\n";
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            field << step << ',' << i << ',' << j << ',' << format::number(g.alpha[g.at(i, j)]) << ','
                  << format::number(g.u[g.at(i, j)]) << '\n';
}

}  // namespace

RunArtifacts run_sharp(const SimConfig& config, const RunOptions& options)
{
    SimConfig c = config;
    c.solver = SolverChoice::sharp;
    c.validate();
    const kinetics::KineticsParams kin(c.omega0, c.delta, c.film_scaling);
    const auto speed = [&](double u) {
        u = std::clamp(u, 0.0, c.omega0);
        return options.speed_override ? options.speed_override(u) : kin.speed(u);
    };

    RunArtifacts out;
    out.solver = "sharp";
    Recorder rec(c, out);

    auto curve = envelope::EnvelopeCurve::circle(Vec2::Zero(), c.r_d, c.h_d);
    auto disc = std::make_unique<Discretization>(discretize(curve, c));
    ScalarField u = diffusion::init_field(disc->nodes, c.omega0);
    const auto polyline = [&] { return std::vector<Vec2>(curve.nodes().begin(), curve.nodes().end()); };
    rec.snapshots(0.0, polyline);

    const long long total = c.steps();
    long long step = 0;
    try {
        std::vector<double> speeds;
        for (step = 1; step <= total; ++step) {
            const double t = static_cast<double>(step) * c.dt;
            disc->check(u);
            u = disc->solver->step(u, c.dt);

            const auto interp = disc->pu->fit_corrected(u);
            speeds.assign(curve.size(), 0.0);
            for (std::size_t i = 0; i < curve.size(); ++i)
                speeds[i] = speed(probe(interp, *disc, curve, c, curve.nodes()[i] + c.delta * curve.normal(i)));
            const double v_tip = speeds[envelope::tip_node(curve)];

            const auto moved = envelope::advect_nodes(curve, speeds, c.dt);
            if (step % c.cadence == 0) {
                curve = envelope::reconstruct(moved, c.h_d);
                auto next = std::make_unique<Discretization>(discretize(curve, c));
                std::vector<double> values(next->nodes.size(), 0.0);
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (next->nodes.kinds[i] == NodeKind::envelope) continue;
                    values[i] = std::clamp(evaluate(interp, *disc, next->nodes.positions[i]), 0.0, c.omega0);
                }
                disc = std::move(next);
                u = ScalarField(std::move(values), disc->nodes.generation);
            } else {
                curve = envelope::EnvelopeCurve(moved);
                NodeSet nodes = disc->nodes;
                for (std::size_t k = 0; k < disc->envelope_ids.size(); ++k) {
                    nodes.positions[disc->envelope_ids[k]] = curve.nodes()[k];
                    nodes.normals[disc->envelope_ids[k]] = curve.normal(k);
                }
                nodes.finalize();
                disc = std::make_unique<Discretization>(std::move(nodes), c);
                u.generation = disc->nodes.generation;
            }

            const bool due = rec.due(step, total);
            if (due) rec.record(step, t, envelope::tip_position(curve), v_tip, disc->nodes.size());
            rec.snapshots(t, polyline);
            out.steps = step;
            if (options.progress) options.progress(step, t);
            if (due && options.stop && options.stop(out.records.back())) break;
        }
    } catch (const Error&) {
        dump_sharp(options, curve, *disc, u, step);
        throw;
    }
    return out;
}

RunArtifacts run_diffuse(const SimConfig& config, const RunOptions& options)
{
    SimConfig c = config;
    c.solver = SolverChoice::diffuse;
    c.validate();
    const kinetics::KineticsParams kin(c.omega0, c.delta, c.film_scaling);

    reference::GridOptions go;
    go.a_m = c.a_m;
    go.h_g = c.h_g;
    go.r_d = c.r_d;
    go.omega0 = c.omega0;
    go.w_factor = c.w_factor;
    go.b = c.b;
    go.dt = c.dt;
    go.extension = c.extension;
    auto grid = reference::make_grid(go);

    RunArtifacts out;
    out.solver = "diffuse";
    Recorder rec(c, out);
    const auto polyline = [&] { return reference::alpha_contour(grid); };
    rec.snapshots(0.0, polyline);

    const long long total = c.steps();
    const double half = 0.5 * c.a_m;
    long long step = 0;
    try {
        for (step = 1; step <= total; ++step) {
            const double t = static_cast<double>(step) * c.dt;
            grid = reference::diffuse_step_grid(grid, c.dt);
            auto v = reference::envelope_speed_on_grid(grid, kin);
            if (options.speed_override)
                for (std::size_t k = 0; k < v.size(); ++k)
                    if (v[k] != 0.0) v[k] = options.speed_override(0.0);
            const double x_before = reference::tip_position_grid(grid).value_or(half);
            const double v_tip = reference::sample_bilinear(grid, v, Vec2(std::min(x_before, half), 0.0));
            grid = reference::phase_step(grid, v, c.dt);

            const auto x_tip = reference::tip_position_grid(grid);
            const bool due = rec.due(step, total) || !x_tip;
            if (due) rec.record(step, t, x_tip.value_or(half), v_tip, grid.size());
            rec.snapshots(t, polyline);
            out.steps = step;
            if (options.progress) options.progress(step, t);
            if (!x_tip) break;  // the grain has reached the wall
            if (due && options.stop && options.stop(out.records.back())) break;
        }
    } catch (const Error&) {
        dump_diffuse(options, grid, step);
        throw;
    }
    return out;
}

std::vector<RunArtifacts> run(const SimConfig& config, const RunOptions& options)
{
    std::vector<RunArtifacts> runs;
    if (config.solver != SolverChoice::diffuse) runs.push_back(run_sharp(config, options));
    if (config.solver != SolverChoice::sharp) runs.push_back(run_diffuse(config, options));
    return runs;
}

}  // namespace gem::driver
