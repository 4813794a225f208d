#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gem/driver.hpp"
#include "gem/envelope.hpp"
#include "gem/errors.hpp"
#include "gem/reference.hpp"
#include "gem/report.hpp"

using namespace gem;
namespace fs = std::filesystem;

namespace {

SimConfig small()
{
    SimConfig c;
    c.a_m = 4.0;
    c.h_d = 0.1;
    c.dt = 5e-4;
    c.t_tot = 0.05;
    c.record_interval = 10;
    c.snapshots = {0.05};
    c.h_g = 0.05;
    c.timing = false;
    return c;
}

fs::path scratch(const char* name)
{
    auto p = fs::temp_directory_path() / ("gem_test_" + std::string(name));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("zero growth keeps the initial circle")
{
    driver::RunOptions o;
    o.speed_override = [](double) { return 0.0; };
    const auto run = driver::run_sharp(small(), o);
    REQUIRE(run.snapshots.size() == 1);
    const auto circle = envelope::EnvelopeCurve::circle(Vec2::Zero(), 0.22, 0.1);
    REQUIRE(run.snapshots[0].polyline.size() == circle.size());
    double err = 0.0;
    for (std::size_t i = 0; i < circle.size(); ++i)
        err = std::max(err, (run.snapshots[0].polyline[i] - circle.nodes()[i]).norm());
    CHECK(err < 1e-6);
    for (const auto& r : run.records) CHECK(r.v_tip == 0.0);
}

TEST_CASE("record schedule and early transient")
{
    const auto c = small();
    const auto run = driver::run_sharp(c);
    CHECK(run.steps == 100);
    REQUIRE(run.records.size() == 11);  // step 1 and every 10 steps
    CHECK(run.records[0].t == doctest::Approx(5e-4));
    for (std::size_t k = 1; k < run.records.size(); ++k) {
        CHECK(run.records[k].t > run.records[k - 1].t);
        CHECK(run.records[k].x_tip > run.records[k - 1].x_tip);
    }
    // The probe initially reads omega0, so the first tip speed is the
    // speed of the undisturbed melt.
    const kinetics::KineticsParams kin(0.18, 1.0);
    CHECK(run.records[0].v_tip == doctest::Approx(kin.speed(0.18)).epsilon(1e-3));
    CHECK(run.records[0].v_tip > 1.0);
    CHECK(run.records.back().v_tip < run.records[0].v_tip);
    for (const auto& r : run.records) CHECK(r.ms_per_step == 0.0);
}

TEST_CASE("identical config and seed give identical records")
{
    auto c = small();
    c.t_tot = 0.02;
    const auto a = driver::run_sharp(c);
    const auto b = driver::run_sharp(c);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].x_tip == b.records[k].x_tip);
        CHECK(a.records[k].v_tip == b.records[k].v_tip);
        CHECK(a.records[k].node_count == b.records[k].node_count);
    }
}

TEST_CASE("cadence above one moves envelope nodes in place")
{
    auto c = small();
    c.cadence = 5;
    c.t_tot = 0.02;
    const auto a = driver::run_sharp(c);
    c.cadence = 1;
    const auto b = driver::run_sharp(c);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.records.back().x_tip == doctest::Approx(b.records.back().x_tip).epsilon(1e-3));
}

TEST_CASE("invalid config is rejected before running")
{
    auto c = small();
    c.dt = 0.01;
    CHECK_THROWS_AS(driver::run_sharp(c), ConfigError);
    c = small();
    c.r_d = 3.0;
    CHECK_THROWS_AS(driver::run_diffuse(c), ConfigError);
}

TEST_CASE("diffuse run: zero growth is static, growth is monotone")
{
    auto c = small();
    driver::RunOptions o;
    o.speed_override = [](double) { return 0.0; };
    const auto still = driver::run_diffuse(c, o);
    // Only the discrete profile relaxes; the contour stays put to a tiny
    // fraction of the grid spacing.
    for (const auto& r : still.records) CHECK(std::abs(r.x_tip - still.records[0].x_tip) < 0.02 * c.h_g);

    const auto run = driver::run_diffuse(c);
    REQUIRE(run.records.size() == 11);
    for (std::size_t k = 1; k < run.records.size(); ++k) CHECK(run.records[k].x_tip >= run.records[k - 1].x_tip);
    CHECK(run.records.back().x_tip > run.records[0].x_tip);
    CHECK(run.records[0].node_count == 81u * 81u);
}

TEST_CASE("empty run writes headers and empty plots")
{
    auto c = small();
    c.t_tot = 0.0;
    c.snapshots = {};
    c.solver = SolverChoice::both;
    const auto runs = driver::run(c);
    REQUIRE(runs.size() == 2);
    const auto dir = scratch("empty");
    report::emit_report(runs, dir);
    for (const char* s : {"sharp", "diffuse"})
        CHECK(slurp(dir / s / "timeseries.csv") == std::string(report::kTimeseriesHeader) + "\n");
    const auto svg = slurp(dir / "tip_velocity.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("x_tip") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("report: legend, snapshot files, read-back")
{
    auto c = small();
    c.snapshots = {0.01, 0.02, 0.05};
    c.solver = SolverChoice::both;
    const auto runs = driver::run(c);
    const auto dir = scratch("report");
    report::emit_report(runs, dir);
    for (const char* s : {"sharp", "diffuse"}) {
        int count = 0;
        for (const auto& e : fs::directory_iterator(dir / s))
            if (e.path().filename().string().rfind("envelope_", 0) == 0) ++count;
        CHECK(count == 3);
    }
    CHECK(fs::exists(dir / "sharp" / "envelope_0.05.csv"));
    const auto svg = slurp(dir / "tip_velocity.svg");
    CHECK(svg.find(">sharp<") != std::string::npos);
    CHECK(svg.find(">diffuse<") != std::string::npos);

    const auto back = report::load_runs(dir);
    REQUIRE(back.size() == 2);
    REQUIRE(back[0].records.size() == runs[0].records.size());
    for (std::size_t k = 0; k < back[0].records.size(); ++k) {
        CHECK(back[0].records[k].t == runs[0].records[k].t);
        CHECK(back[0].records[k].x_tip == runs[0].records[k].x_tip);
    }
    REQUIRE(back[1].snapshots.size() == 3);
    CHECK(back[1].snapshots[2].polyline == runs[1].snapshots[2].polyline);

    fs::remove(dir / "envelopes.svg");
    report::regenerate_svgs(dir);
    CHECK(fs::exists(dir / "envelopes.svg"));
    fs::remove_all(dir);
    CHECK_THROWS_AS(report::regenerate_svgs(dir), IoError);
}
