#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "gem/config.hpp"
#include "gem/driver.hpp"
#include "gem/errors.hpp"
#include "gem/format.hpp"
#include "gem/kinetics.hpp"
#include "gem/report.hpp"

namespace {

std::string flag_name(std::string key)
{
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

int run_command(const std::string& config_path, const std::string& preset,
                const std::map<std::string, std::string>& overrides, bool quiet)
{
    gem::SimConfig config;
    if (!preset.empty()) gem::apply_preset(config, preset);
    if (!config_path.empty()) gem::load_config(config, config_path);
    for (const auto& key : gem::config_keys())
        if (const auto it = overrides.find(key); it != overrides.end() && !it->second.empty())
            gem::set_value(config, key, it->second);
    config.validate();

    gem::driver::RunOptions options;
    options.dump_dir = config.out.string();
    const long long total = config.steps();
    if (!quiet)
        options.progress = [total](long long step, double t) {
            if (step % 1000 == 0 || step == total)
                std::fprintf(stderr, "step %lld/%lld t=%s\n", step, total, gem::format::number(t).c_str());
        };
    const auto runs = gem::driver::run(config, options);
    gem::report::emit_report(runs, config.out);
    for (const auto& r : runs) {
        std::cout << r.solver << ": " << r.steps << " steps";
        if (!r.records.empty())
            std::cout << ", x_tip=" << gem::format::number(r.records.back().x_tip)
                      << ", v_tip=" << gem::format::number(r.records.back().v_tip);
        std::cout << "\n";
    }
    return 0;
}

int kinetics_command(double omega0, double delta, double pe_max, int rows, const std::string& scaling,
                     const std::string& out)
{
    if (rows < 1) throw gem::DomainError("--rows must be at least 1");
    if (!(pe_max > 0.0)) throw gem::DomainError("--table-pe-max must be positive");
    gem::SimConfig tmp;
    gem::set_value(tmp, "film_scaling", scaling);
    const gem::kinetics::KineticsParams kin(omega0, delta, tmp.film_scaling);

    std::vector<double> pes;
    for (int k = 1; k <= rows; ++k) pes.push_back(pe_max * k / rows);
    if (kin.pe_iv() <= pe_max) pes.push_back(kin.pe_iv());
    std::sort(pes.begin(), pes.end());

    std::string text = "pe,u_delta,v\n";
    for (double pe : pes)
        text += gem::format::number(pe) + ',' + gem::format::number(gem::kinetics::u_delta_of_pe(pe, kin.film())) +
                ',' + gem::format::number(gem::kinetics::tip_speed(pe, kin.pe_iv())) + '\n';
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw gem::IoError("cannot write " + out);
        f << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Grain envelope dendrite simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the sharp and/or diffuse solver and write CSV/SVG outputs");
    std::string config_path, preset;
    bool quiet = false;
    std::map<std::string, std::string> overrides;
    run->add_option("--config", config_path, "Config file of key = value lines");
    run->add_option("--preset", preset, "Named parameter set (desk, default)");
    run->add_flag("--quiet", quiet, "No progress output");
    for (const auto& key : gem::config_keys()) run->add_option(flag_name(key), overrides[key], "Override " + key);

    auto* kin = app.add_subcommand("kinetics", "Tabulate u_delta(Pe) and v as CSV");
    double omega0 = 0.18, delta = 1.0, pe_max = 0.05;
    int rows = 20;
    std::string scaling = "tip_radius", kin_out;
    kin->add_option("--omega0", omega0, "Supersaturation")->capture_default_str();
    kin->add_option("--delta", delta, "Stagnant film thickness")->capture_default_str();
    kin->add_option("--table-pe-max", pe_max, "Largest tabulated Peclet number")->capture_default_str();
    kin->add_option("--rows", rows, "Number of evenly spaced rows")->capture_default_str();
    kin->add_option("--film-scaling", scaling, "tip_radius or literal")->capture_default_str();
    kin->add_option("--out", kin_out, "Output file (stdout when omitted)");

    auto* rep = app.add_subcommand("report", "Regenerate the SVG plots from existing CSV outputs");
    std::string report_dir = "out";
    rep->add_option("--out", report_dir, "Output directory of a previous run")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return run_command(config_path, preset, overrides, quiet);
        if (*kin) return kinetics_command(omega0, delta, pe_max, rows, scaling, kin_out);
        if (*rep) {
            gem::report::regenerate_svgs(report_dir);
            return 0;
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
    return 0;
}
