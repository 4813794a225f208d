#include "gem/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "gem/errors.hpp"
#include "gem/format.hpp"

namespace gem {

namespace {

struct Key {
    std::string name;
    std::function<void(SimConfig&, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                      std::string(expected) + ")");
}

Key real(std::string name, double SimConfig::*field)
{
    return {name,
            [name, field](SimConfig& c, std::string_view v) {
                const auto x = format::parse_double(v);
                if (!x || !std::isfinite(*x)) bad_value(name, v, "a number");
                c.*field = *x;
            },
            [field](const SimConfig& c) { return format::number(c.*field); }};
}

Key integer(std::string name, int SimConfig::*field)
{
    return {name,
            [name, field](SimConfig& c, std::string_view v) {
                const auto x = format::parse_int(v);
                if (!x || *x < -2147483647LL || *x > 2147483647LL) bad_value(name, v, "an integer");
                c.*field = static_cast<int>(*x);
            },
            [field](const SimConfig& c) { return format::number(static_cast<long long>(c.*field)); }};
}

template <class E>
Key choice(std::string name, E SimConfig::*field, std::vector<std::pair<std::string, E>> options)
{
    std::string expected;
    for (const auto& [label, _] : options) expected += (expected.empty() ? "" : "|") + label;
    return {name,
            [name, field, options, expected](SimConfig& c, std::string_view v) {
                v = format::trim(v);
                for (const auto& [label, e] : options)
                    if (v == label) {
                        c.*field = e;
                        return;
                    }
                bad_value(name, v, expected);
            },
            [field, options](const SimConfig& c) {
                for (const auto& [label, e] : options)
                    if (c.*field == e) return label;
                return std::string{};
            }};
}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        k.push_back(real("omega0", &SimConfig::omega0));
        k.push_back(real("delta", &SimConfig::delta));
        k.push_back(real("a_m", &SimConfig::a_m));
        k.push_back(real("r_d", &SimConfig::r_d));
        k.push_back(real("h_d", &SimConfig::h_d));
        k.push_back(real("h_m_factor", &SimConfig::h_m_factor));
        k.push_back(integer("support", &SimConfig::support));
        k.push_back(real("dt", &SimConfig::dt));
        k.push_back(real("t_tot", &SimConfig::t_tot));
        k.push_back(integer("cadence", &SimConfig::cadence));
        k.push_back(integer("record_interval", &SimConfig::record_interval));
        k.push_back({"snapshots",
                     [](SimConfig& c, std::string_view v) {
                         std::vector<double> out;
                         v = format::trim(v);
                         while (!v.empty()) {
                             const auto comma = v.find(',');
                             const auto item = format::trim(v.substr(0, comma));
                             const auto x = format::parse_double(item);
                             if (!x || !std::isfinite(*x)) bad_value("snapshots", v, "comma-separated times");
                             out.push_back(*x);
                             if (comma == std::string_view::npos) break;
                             v.remove_prefix(comma + 1);
                         }
                         c.snapshots = std::move(out);
                     },
                     [](const SimConfig& c) {
                         std::string s;
                         for (double t : c.snapshots) s += (s.empty() ? "" : ",") + format::number(t);
                         return s;
                     }});
        k.push_back({"out", [](SimConfig& c, std::string_view v) { c.out = std::string(format::trim(v)); },
                     [](const SimConfig& c) { return c.out.string(); }});
        k.push_back({"seed",
                     [](SimConfig& c, std::string_view v) {
                         const auto x = format::parse_int(v);
                         if (!x || *x < 0) bad_value("seed", v, "a nonnegative integer");
                         c.seed = static_cast<std::uint64_t>(*x);
                     },
                     [](const SimConfig& c) { return format::number(static_cast<long long>(c.seed)); }});
        k.push_back(choice<SolverChoice>("solver", &SimConfig::solver,
                                         {{"sharp", SolverChoice::sharp},
                                          {"diffuse", SolverChoice::diffuse},
                                          {"both", SolverChoice::both}}));
        k.push_back(choice<kinetics::FilmScaling>("film_scaling", &SimConfig::film_scaling,
                                                  {{"tip_radius", kinetics::FilmScaling::tip_radius},
                                                   {"literal", kinetics::FilmScaling::literal}}));
        k.push_back(choice<ProbePolicy>("probe_policy", &SimConfig::probe_policy,
                                        {{"extrapolate", ProbePolicy::extrapolate}, {"clamp", ProbePolicy::clamp}}));
        k.push_back(real("weight_shape", &SimConfig::weight_shape));
        k.push_back(real("c_stab", &SimConfig::c_stab));
        k.push_back(real("h_g", &SimConfig::h_g));
        k.push_back(real("w_factor", &SimConfig::w_factor));
        k.push_back(real("b", &SimConfig::b));
        k.push_back(integer("extension", &SimConfig::extension));
        k.push_back(choice<bool>("timing", &SimConfig::timing, {{"on", true}, {"off", false}}));
        return k;
    }();
    return table;
}

const Key& find_key(std::string_view name)
{
    for (const auto& k : keys())
        if (k.name == name) return k;
    std::string valid;
    for (const auto& k : keys()) valid += (valid.empty() ? "" : ", ") + k.name;
    throw ConfigError("unknown key '" + std::string(name) + "'; valid keys: " + valid);
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw ConfigError(what);
}

}  // namespace

long long SimConfig::steps() const { return std::llround(t_tot / dt); }

void SimConfig::validate() const
{
    require(omega0 > 0.0 && omega0 < 1.0, "omega0 must lie in (0, 1)");
    require(delta > 0.0, "delta must be positive");
    require(a_m > 0.0, "a_m must be positive");
    require(r_d > 0.0, "r_d must be positive");
    require(r_d < 0.5 * a_m, "r_d must be smaller than a_m / 2");
    require(h_d > 0.0, "h_d must be positive");
    require(h_m_factor >= 1.0, "h_m_factor must be at least 1");
    require(support >= 6, "support must be at least 6");
    require(dt > 0.0, "dt must be positive");
    require(t_tot >= 0.0, "t_tot must be nonnegative");
    require(cadence >= 1, "cadence must be at least 1");
    require(record_interval >= 1, "record_interval must be at least 1");
    for (double t : snapshots) require(t >= 0.0, "snapshot times must be nonnegative");
    require(weight_shape >= 0.0, "weight_shape must be nonnegative");
    require(c_stab > 0.0, "c_stab must be positive");
    require(h_g > 0.0, "h_g must be positive");
    require(w_factor > 0.0, "w_factor must be positive");
    require(extension >= 1, "extension must be at least 1");
    if (solver != SolverChoice::diffuse)
        require(dt <= c_stab * h_d * h_d,
                "dt = " + format::number(dt) + " exceeds the stability guard c_stab * h_d^2 = " +
                    format::number(c_stab * h_d * h_d));
    if (solver != SolverChoice::sharp)
        require(dt <= 0.25 * h_g * h_g,
                "dt = " + format::number(dt) + " exceeds the grid guard h_g^2 / 4 = " +
                    format::number(0.25 * h_g * h_g));
}

SimConfig desk_preset()
{
    SimConfig c;
    apply_preset(c, "desk");
    return c;
}

void apply_preset(SimConfig& config, std::string_view name)
{
    if (name == "desk") {
        config.a_m = 10.0;
        config.h_d = 0.1;
        config.dt = 5e-4;
        config.t_tot = 3.0;
        config.snapshots = {1.0, 2.0, 3.0};
        return;
    }
    if (name == "default") {
        const SimConfig d;
        config.a_m = d.a_m;
        config.h_d = d.h_d;
        config.dt = d.dt;
        config.t_tot = d.t_tot;
        config.snapshots = d.snapshots;
        return;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: desk, default");
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& k : keys()) n.push_back(k.name);
        return n;
    }();
    return names;
}

void set_value(SimConfig& config, std::string_view key, std::string_view value)
{
    find_key(format::trim(key)).set(config, value);
}

std::string get_value(const SimConfig& config, std::string_view key) { return find_key(key).get(config); }

void parse_config(SimConfig& config, std::string_view text)
{
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = format::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const auto key = eq == std::string_view::npos ? std::string_view{} : format::trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                              std::string(line) + "'");
        try {
            set_value(config, key, format::trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void load_config(SimConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    parse_config(config, buf.str());
}

std::string_view to_string(SolverChoice s)
{
    switch (s) {
        case SolverChoice::sharp: return "sharp";
        case SolverChoice::diffuse: return "diffuse";
        case SolverChoice::both: return "both";
    }
    return "";
}

std::string_view to_string(ProbePolicy p)
{
    return p == ProbePolicy::extrapolate ? "extrapolate" : "clamp";
}

}  // namespace gem
