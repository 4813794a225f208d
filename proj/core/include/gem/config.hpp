#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gem/kinetics.hpp"

namespace gem {

enum class SolverChoice { sharp, diffuse, both };

/// How a probe point outside the square is evaluated.
enum class ProbePolicy {
    extrapolate,  // nearest patch's local fit
    clamp,        // PU value at the closest point inside the square
};

struct SimConfig {
    double omega0 = 0.18;
    double delta = 1.0;
    double a_m = 20.0;
    double r_d = 0.22;
    double h_d = 0.05;
    double h_m_factor = 3.0;  // h_m = h_m_factor * h_d
    int support = 12;
    double dt = 1e-4;
    double t_tot = 12.0;
    int cadence = 1;          // steps between node regenerations
    int record_interval = 100;
    std::vector<double> snapshots{2.0, 6.0, 12.0};
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;
    SolverChoice solver = SolverChoice::sharp;

    kinetics::FilmScaling film_scaling = kinetics::FilmScaling::tip_radius;
    ProbePolicy probe_policy = ProbePolicy::extrapolate;
    double weight_shape = 0.5;
    double c_stab = 0.2;

    double h_g = 0.05;      // diffuse reference grid spacing
    double w_factor = 1.5;  // w_alpha = w_factor * h_g
    double b = 0.0;         // <= 0 selects the automatic relaxation
    int extension = 4;

    bool timing = false;    // wall-clock ms_per_step; off writes 0 so reruns are bitwise identical

    [[nodiscard]] double h_m() const { return h_m_factor * h_d; }
    [[nodiscard]] long long steps() const;
    /// Throws ConfigError on the first violated invariant.
    void validate() const;
};

/// a_m = 10, h_d = 0.1, dt = 5e-4, t_tot = 3.
SimConfig desk_preset();
/// Applies a named preset on top of `config`; throws ConfigError for unknown names.
void apply_preset(SimConfig& config, std::string_view name);

/// Names accepted by set_value and the config file, in declaration order.
const std::vector<std::string>& config_keys();

/// Assigns one field from its textual form. Throws ConfigError for unknown
/// keys (listing the valid ones) and unparsable values.
void set_value(SimConfig& config, std::string_view key, std::string_view value);
/// Textual form of one field, accepted back by set_value.
std::string get_value(const SimConfig& config, std::string_view key);

/// `key = value` lines, `#` starts a comment. Errors carry the line number.
void parse_config(SimConfig& config, std::string_view text);
void load_config(SimConfig& config, const std::filesystem::path& path);

std::string_view to_string(SolverChoice s);
std::string_view to_string(ProbePolicy p);

}  // namespace gem
