#include <benchmark/benchmark.h>

#include "gem/diffusion.hpp"
#include "gem/envelope.hpp"
#include "gem/kinetics.hpp"
#include "gem/meshless.hpp"
#include "gem/node_gen.hpp"
#include "gem/pu.hpp"
#include "gem/reference.hpp"

using namespace gem;

namespace {

nodes::DomainSpec desk_spec(double h_d)
{
    nodes::DomainSpec spec;
    spec.a_m = 10.0;
    spec.h_d = h_d;
    spec.h_m = 3.0 * h_d;
    spec.envelope = envelope::EnvelopeCurve::circle(Vec2::Zero(), 1.0, h_d);
    return spec;
}

void BM_Kinetics(benchmark::State& state)
{
    const kinetics::KineticsParams kin(0.18, 1.0);
    double u = 0.0;
    for (auto _ : state) {
        u += 1e-6;
        if (u > 0.18) u = 0.0;
        benchmark::DoNotOptimize(kin.speed(u));
    }
}
BENCHMARK(BM_Kinetics);

void BM_Fill(benchmark::State& state)
{
    const auto spec = desk_spec(0.1 / static_cast<double>(state.range(0)));
    std::size_t n = 0;
    for (auto _ : state) n = nodes::generate(spec).size();
    state.counters["nodes"] = static_cast<double>(n);
}
BENCHMARK(BM_Fill)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Weights(benchmark::State& state)
{
    const auto nodes = nodes::generate(desk_spec(0.1 / static_cast<double>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(meshless::build_weights(nodes, 12));
    state.counters["nodes"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_Weights)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DiffusionStep(benchmark::State& state)
{
    const auto nodes = nodes::generate(desk_spec(0.1));
    const auto weights = meshless::build_weights(nodes, 12);
    const diffusion::DiffusionSolver solver(nodes, weights);
    auto u = diffusion::init_field(nodes, 0.18);
    for (auto _ : state) u = solver.step(u, 5e-4);
}
BENCHMARK(BM_DiffusionStep)->Unit(benchmark::kMicrosecond);

void BM_PUBuildAndFit(benchmark::State& state)
{
    const auto nodes = nodes::generate(desk_spec(0.1));
    const auto stencils = meshless::find_stencils(nodes, 12);
    const auto u = diffusion::init_field(nodes, 0.18);
    for (auto _ : state) {
        const meshless::PUApproximator pu(nodes, stencils);
        benchmark::DoNotOptimize(pu.fit(u));
    }
}
BENCHMARK(BM_PUBuildAndFit)->Unit(benchmark::kMillisecond);

void BM_PUEval(benchmark::State& state)
{
    const auto nodes = nodes::generate(desk_spec(0.1));
    const auto stencils = meshless::find_stencils(nodes, 12);
    const auto interp = meshless::PUApproximator(nodes, stencils).fit(diffusion::init_field(nodes, 0.18));
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(interp(nodes.positions[k] + Vec2(0.01, 0.02)));
        k = (k + 1) % nodes.size();
    }
}
BENCHMARK(BM_PUEval);

void BM_Reconstruct(benchmark::State& state)
{
    const auto circle = envelope::EnvelopeCurve::circle(Vec2::Zero(), 1.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(envelope::reconstruct(circle.nodes(), 0.05));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMicrosecond);

void BM_GridPhaseStep(benchmark::State& state)
{
    reference::GridOptions o;
    o.a_m = 10.0;
    o.dt = 5e-4;
    auto grid = reference::make_grid(o);
    const kinetics::KineticsParams kin(0.18, 1.0);
    for (auto _ : state) {
        grid = reference::diffuse_step_grid(grid, o.dt);
        const auto v = reference::envelope_speed_on_grid(grid, kin);
        grid = reference::phase_step(grid, v, o.dt);
    }
}
BENCHMARK(BM_GridPhaseStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
