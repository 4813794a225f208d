// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
// Exit status is nonzero when a criterion fails that is not listed with
// --expect-fail, so ctest tracks regressions while a documented shortfall
// still prints FAIL.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clouds.hpp"
#include "erfc_oracle.hpp"
#include "gem/config.hpp"
#include "gem/diffusion.hpp"
#include "gem/driver.hpp"
#include "gem/envelope.hpp"
#include "gem/kinetics.hpp"
#include "gem/meshless.hpp"
#include "gem/node_gen.hpp"
#include "gem/pu.hpp"
#include "gem/reference.hpp"
#include "gem/report.hpp"
#include "radial_oracle.hpp"

using namespace gem;
namespace fs = std::filesystem;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- 1, 2

Result kinetics_oracle()
{
    double worst = 0.0;
    for (double film : {0.5, 1.0, 2.0})
        for (int k = 0; k <= 400; ++k) {
            const double pe = 1e-4 * std::pow(5.0 / 1e-4, k / 400.0);
            const long double ref = testing::u_delta_oracle(pe, film);
            const double got = kinetics::u_delta_of_pe(pe, film);
            worst = std::max(worst, static_cast<double>(std::abs((got - ref) / ref)));
        }
    return {worst <= 1e-10, "max relative error " + sci(worst) + " over 1203 points (limit 1e-10)"};
}

Result free_tip()
{
    const double pe_iv = kinetics::solve_pe_iv(0.18);
    const double identity = std::abs(static_cast<double>(testing::ivantsov_oracle(pe_iv)) - 0.18);
    const double u = kinetics::u_delta_of_pe(pe_iv, 1.0);
    const double v = kinetics::tip_speed(kinetics::pe_of_u_delta(u, 1.0).pe, pe_iv);
    const bool ok = identity <= 1e-8 && std::abs(v - 1.0) <= 1e-6;
    return {ok, "Pe_iv " + sci(pe_iv) + ", |F(Pe_iv) - 0.18| " + sci(identity) + " (limit 1e-8), round-trip |v - 1| " +
                    sci(std::abs(v - 1.0)) + " (limit 1e-6)"};
}

// ---------------------------------------------------------------- 3

double reproduction_error(const NodeSet& nodes)
{
    using meshless::compute_weights;
    const auto st = meshless::find_stencils(nodes, 12);
    const Vec2 n(0.6, -0.8);
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto sup = st.support(i);
        const std::array<std::vector<double>, 4> w = {
            compute_weights(nodes, sup, i, meshless::Laplacian{}), compute_weights(nodes, sup, i, meshless::Ddx{}),
            compute_weights(nodes, sup, i, meshless::Ddy{}), compute_weights(nodes, sup, i, meshless::NormalDerivative{n})};
        const double r = meshless::stencil_radius(nodes, sup, i);
        const Vec2 c = nodes.positions[i];
        for (int px = 0; px <= 2; ++px)
            for (int py = 0; px + py <= 2; ++py) {
                const auto mono = [&](const Vec2& p) { return std::pow(p.x(), px) * std::pow(p.y(), py); };
                const double dx = px ? px * std::pow(c.x(), px - 1) * std::pow(c.y(), py) : 0.0;
                const double dy = py ? py * std::pow(c.x(), px) * std::pow(c.y(), py - 1) : 0.0;
                const double lap = (px == 2 ? 2.0 * std::pow(c.y(), py) : 0.0) + (py == 2 ? 2.0 * std::pow(c.x(), px) : 0.0);
                const std::array<double, 4> exact = {lap, dx, dy, n.x() * dx + n.y() * dy};
                const std::array<double, 4> scale = {r * r, r, r, r};
                for (std::size_t op = 0; op < 4; ++op) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < sup.size(); ++k)
                        s += w[op][k] * mono(nodes.positions[static_cast<std::size_t>(sup[k])]);
                    worst = std::max(worst, std::abs(s - exact[op]) * scale[op]);
                }
            }
    }
    return worst;
}

Result stencils()
{
    double repro = 0.0;
    for (std::uint64_t seed : {1, 2, 3})
        repro = std::max(repro, reproduction_error(testing::jittered_grid(-1, 1, 0.05, 0.35, seed)));

    const auto gauss = [](const Vec2& p) { return std::exp(-p.squaredNorm()); };
    const auto lap = [](const Vec2& p) { return (4 * p.squaredNorm() - 4) * std::exp(-p.squaredNorm()); };
    std::vector<double> err;
    for (double h : {0.1, 0.05, 0.025}) {
        const auto nodes = nodes::fill_box(Vec2(-1.5, -1.5), Vec2(1.5, 1.5), h, {.seed = 3});
        const auto ws = meshless::build_weights(nodes, 12);
        std::vector<double> u(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = gauss(nodes.positions[i]);
        double e = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes.positions[i].cwiseAbs().maxCoeff() <= 1.0)
                e = std::max(e, std::abs(meshless::apply_operator(ws, u, i) - lap(nodes.positions[i])));
        err.push_back(e);
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    const bool ok = repro <= 1e-9 && o1 >= 1.5 && o2 >= 1.5;
    return {ok, "monomial reproduction " + sci(repro) + " (limit 1e-9); Gaussian Laplacian max error " + sci(err[0]) +
                    " / " + sci(err[1]) + " / " + sci(err[2]) + ", observed order " + sci(o1) + " / " + sci(o2) +
                    " (limit 1.5)"};
}

// ---------------------------------------------------------------- 4, 5

Result cosine_mode()
{
    const double a = 1.0, h = 0.05, t_end = 0.1, dt = 1e-4;
    nodes::DomainSpec spec;
    spec.a_m = a;
    spec.h_d = spec.h_m = h;
    const auto nodes = nodes::generate(spec);
    const auto ws = meshless::build_weights(nodes, 12);
    const diffusion::DiffusionSolver solver(nodes, ws);
    std::vector<double> mode(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) mode[i] = std::cos(M_PI * (nodes.positions[i].x() + a / 2) / a);
    ScalarField u(mode, nodes.generation);
    for (long k = 0; k < std::lround(t_end / dt); ++k) u = solver.step(u, dt);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        num += u[i] * mode[i];
        den += mode[i] * mode[i];
    }
    const double ratio = (num / den) / std::exp(-M_PI * M_PI * t_end / (a * a));
    return {std::abs(ratio - 1) <= 0.01, "amplitude / analytic " + sci(ratio) + " (limit 1 +- 0.01)"};
}

Result radial()
{
    const double r_d = 0.22, delta = 1.0, t_end = 0.5, dt = 1e-4;
    nodes::DomainSpec spec;
    spec.a_m = 10.0;
    spec.h_d = 0.05;
    spec.h_m = 0.15;
    spec.envelope = envelope::EnvelopeCurve::circle(Vec2::Zero(), r_d, spec.h_d);
    const auto nodes = nodes::generate(spec);
    const auto ws = meshless::build_weights(nodes, 12);
    const diffusion::DiffusionSolver solver(nodes, ws);
    auto u = diffusion::init_field(nodes, 0.18);
    for (long k = 0; k < std::lround(t_end / dt); ++k) u = solver.step(u, dt);

    // The square wall at distance 5 stands in for the outer Neumann circle.
    testing::RadialOracle oracle(r_d, 5.0, 0.18);
    oracle.advance(t_end);
    const auto pu = meshless::build_pu(nodes, u);
    double worst = 0.0;
    for (std::size_t i = 0; i < spec.envelope.size(); ++i) {
        const Vec2 p = spec.envelope.nodes()[i] + delta * spec.envelope.normal(i);
        worst = std::max(worst, std::abs(pu(p) / oracle.value(p.norm()) - 1));
    }
    return {worst <= 0.01, "worst relative probe error " + sci(worst) + " at r + delta, oracle " +
                               sci(oracle.value(r_d + delta)) + " (limit 0.01)"};
}

// ---------------------------------------------------------------- 6

double level_crossing(const reference::PhaseGrid& g, int j, double level)
{
    for (int i = 0; i + 1 < g.n; ++i) {
        const double a0 = g.alpha[g.at(i, j)], a1 = g.alpha[g.at(i + 1, j)];
        if (a0 >= level && a1 < level) return g.coord(i) + (a0 - level) / (a0 - a1) * g.h;
    }
    return NAN;
}

Result diffuse_properties()
{
    const double dt = 1e-4;
    auto g = reference::make_planar_grid({.a_m = 4, .h_g = 0.05, .dt = dt}, 0.0);
    const auto initial = g.alpha;
    const std::vector<double> zero(g.size(), 0.0);
    for (int k = 0; k < 1000; ++k) g = reference::phase_step(g, zero, dt);
    double drift = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) drift = std::max(drift, std::abs(g.alpha[k] - initial[k]));

    const double v = 1.0, t_end = 0.5;
    auto f = reference::make_planar_grid({.a_m = 4, .h_g = 0.05, .dt = dt}, -1.0);
    const std::vector<double> speed(f.size(), v);
    const int row = f.n / 2;
    const double x0 = level_crossing(f, row, 0.5);
    for (long k = 0; k < std::lround(t_end / dt); ++k) f = reference::phase_step(f, speed, dt);
    const double ratio = (level_crossing(f, row, 0.5) - x0) / t_end / v;
    const bool ok = drift <= 1e-3 && std::abs(ratio - 1) <= 0.02;
    return {ok, "tanh profile drift " + sci(drift) + " over 1000 steps (limit 1e-3); front speed / imposed " +
                    sci(ratio) + " (limit 1 +- 0.02)"};
}

// ---------------------------------------------------------------- 7 - 11

constexpr double kStallSpeed = 0.05;

struct Shared {
    fs::path out;
    bool verbose = false;
    std::optional<driver::RunArtifacts> sharp;

    const driver::RunArtifacts& sharp_desk()
    {
        if (!sharp) {
            auto c = desk_preset();
            c.t_tot = 10.0;  // continued past the preset end until the tip stalls
            c.snapshots = {1.0};
            driver::RunOptions o;
            o.dump_dir = (out / "failure").string();
            o.stop = [](const driver::TimeSeriesRecord& r) { return r.v_tip < kStallSpeed; };
            if (verbose)
                o.progress = [](long long step, double t) {
                    if (step % 1000 == 0) std::fprintf(stderr, "  sharp desk run t=%g\n", t);
                };
            sharp = driver::run_sharp(c, o);
            report::emit_report({*sharp}, out / "desk");
        }
        return *sharp;
    }
};

Result symmetry(Shared& s)
{
    const auto& run = s.sharp_desk();
    if (run.snapshots.empty() || run.snapshots[0].t != 1.0) return {false, "no envelope snapshot at t = 1"};
    const auto& poly = run.snapshots[0].polyline;
    std::vector<Vec2> rotated;
    for (const auto& p : poly) rotated.emplace_back(-p.y(), p.x());
    const double d = envelope::hausdorff_distance(poly, rotated);
    const double limit = 2.0 * desk_preset().h_d;
    return {d <= limit, "Hausdorff distance to the 90 degree rotation " + sci(d) + " at t = 1 (limit " + sci(limit) + ")"};
}

Result transient(Shared& s)
{
    const auto& run = s.sharp_desk();
    const auto preset = desk_preset();
    std::vector<driver::TimeSeriesRecord> recs;
    for (const auto& r : run.records)
        if (r.t <= preset.t_tot + 1e-9) recs.push_back(r);
    if (recs.empty()) return {false, "no records"};
    const double skip = 0.05 * preset.t_tot;
    int rises = 0;
    double worst_rise = 0.0;
    double prev = NAN;
    for (const auto& r : recs) {
        if (r.t < skip) continue;
        if (!std::isnan(prev) && r.v_tip > prev) {
            ++rises;
            worst_rise = std::max(worst_rise, r.v_tip - prev);
        }
        prev = r.v_tip;
    }
    const bool ok = recs.front().v_tip > 1.0 && rises == 0 && recs.back().v_tip < recs.front().v_tip;
    return {ok, "first v_tip " + sci(recs.front().v_tip) + ", v_tip at t = 3 " + sci(recs.back().v_tip) + ", " +
                    std::to_string(rises) + " increases after t = " + sci(skip) + " (largest " + sci(worst_rise) + ")"};
}

Result stall(Shared& s, bool full)
{
    driver::RunArtifacts local;
    const driver::RunArtifacts* run = nullptr;
    SimConfig c = full ? SimConfig{} : desk_preset();
    if (full) {
        c.t_tot = 20.0;
        driver::RunOptions o;
        o.stop = [](const driver::TimeSeriesRecord& r) { return r.v_tip < kStallSpeed; };
        local = driver::run_sharp(c, o);
        run = &local;
    } else {
        run = &s.sharp_desk();
    }
    const double target = 0.5 * c.a_m - c.delta;
    for (const auto& r : run->records)
        if (r.v_tip < kStallSpeed) {
            const bool ok = std::abs(r.x_tip - target) <= 0.5;
            return {ok, "a_m = " + sci(c.a_m) + ": stall (v_tip < 0.05) at t = " + sci(r.t) + ", x_tip = " +
                            sci(r.x_tip) + " (target " + sci(target) + " +- 0.5)"};
        }
    const auto& last = run->records.back();
    return {false, "a_m = " + sci(c.a_m) + ": no stall by t = " + sci(last.t) + " (x_tip " + sci(last.x_tip) +
                       ", v_tip " + sci(last.v_tip) + "; target " + sci(target) + " +- 0.5)"};
}

Result cross_solver(Shared& s)
{
    const auto& sharp = s.sharp_desk();
    auto c = desk_preset();
    c.t_tot = 2.0;
    c.snapshots = {1.0, 2.0};
    const auto diffuse = driver::run_diffuse(c);
    report::emit_report({sharp, diffuse}, s.out / "desk");
    const auto at = [](const driver::RunArtifacts& r, double t) -> std::optional<double> {
        for (const auto& rec : r.records)
            if (std::abs(rec.t - t) < 1e-9) return rec.x_tip;
        return std::nullopt;
    };
    const auto xs = at(sharp, 2.0), xd = at(diffuse, 2.0);
    if (!xs || !xd) return {false, "missing record at t = 2"};
    const double rel = std::abs(*xs - *xd) / *xs;
    return {rel <= 0.10, "x_tip at t = 2: sharp " + sci(*xs) + ", diffuse " + sci(*xd) + ", relative difference " +
                             sci(rel) + " (limit 0.10)"};
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result determinism(Shared& s)
{
    auto c = desk_preset();
    c.t_tot = 0.5;
    c.record_interval = 10;
    c.snapshots = {0.5};
    std::array<std::string, 2> text;
    for (int k = 0; k < 2; ++k) {
        const auto dir = s.out / ("determinism_" + std::to_string(k));
        report::emit_report({driver::run_sharp(c)}, dir);
        text[static_cast<std::size_t>(k)] = read_file(dir / "sharp" / "timeseries.csv");
    }
    const bool ok = !text[0].empty() && text[0] == text[1];
    return {ok, "two desk runs to t = 0.5 (seed " + std::to_string(c.seed) + "): timeseries.csv " +
                    (ok ? "bitwise identical" : "differs") + ", " + std::to_string(text[0].size()) + " bytes"};
}

std::set<int> parse_ids(const std::string& text)
{
    std::set<int> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) ids.insert(std::stoi(item));
    return ids;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::string only, expect_fail, out = (fs::temp_directory_path() / "gem_acceptance").string();
    bool full = false, verbose = false;
    app.add_option("--only", only, "Comma-separated criterion numbers to run");
    app.add_option("--expect-fail", expect_fail, "Criteria whose FAIL does not fail the exit status");
    app.add_option("--out", out, "Directory for run outputs")->capture_default_str();
    app.add_flag("--full", full, "Stall criterion on the full-size domain instead of a_m = 10");
    app.add_flag("--verbose", verbose, "Progress of the long runs on stderr");
    CLI11_PARSE(app, argc, argv);

    Shared shared;
    shared.out = out;
    shared.verbose = verbose;
    fs::remove_all(shared.out);
    fs::create_directories(shared.out);

    const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"kinetics oracle equivalence", kinetics_oracle},
        {"free-tip consistency", free_tip},
        {"stencil exactness and convergence", stencils},
        {"diffusion analytic mode", cosine_mode},
        {"radial oracle", radial},
        {"diffuse reference properties", diffuse_properties},
        {"symmetry of growth", [&] { return symmetry(shared); }},
        {"transient shape", [&] { return transient(shared); }},
        {"stall law", [&] { return stall(shared, full); }},
        {"cross-solver comparability", [&] { return cross_solver(shared); }},
        {"determinism", [&] { return determinism(shared); }},
    };

    const auto selected = parse_ids(only);
    const auto expected = parse_ids(expect_fail);
    int unexpected = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[k].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d %s: %s [%.1f s]%s\n", r.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                    r.detail.c_str(), secs, !r.pass && expected.count(id) ? " (expected)" : "");
        std::fflush(stdout);
        if (!r.pass && !expected.count(id)) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
