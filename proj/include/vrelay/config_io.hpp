#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"

namespace vrelay {

struct Configuration
{
    StreetConfig street;
    StochasticConfig stochastic;
};

/// Ordered `key = value` pairs; later entries win.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size())
        throw ConfigError("not a number: '" + std::string(text) + "'");
    return v;
}

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

inline bool parse_bool(const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("not a boolean: '" + v + "'");
}

}  // namespace detail

/// "exponential <mean>", "deterministic <gap>", "uniform <lo> <hi>" or "empty".
inline DistributionSpec parse_distribution(std::string_view text)
{
    const auto w = detail::split_words(text);
    if (w.size() == 1 && w[0] == "empty")
        return DistributionSpec::empty();
    if (w.size() == 2 && w[0] == "exponential")
        return DistributionSpec::exponential(parse_number(w[1]));
    if (w.size() == 2 && w[0] == "deterministic")
        return DistributionSpec::deterministic(parse_number(w[1]));
    if (w.size() == 3 && w[0] == "uniform")
        return DistributionSpec::uniform(parse_number(w[1]), parse_number(w[2]));
    throw ConfigError("bad distribution: '" + std::string(text) + "'");
}

inline std::string format_distribution(const DistributionSpec& d)
{
    switch (d.family) {
    case GapFamily::exponential:
        return std::isfinite(d.value) ? "exponential " + format_number(d.value) : "empty";
    case GapFamily::deterministic:
        return "deterministic " + format_number(d.value);
    case GapFamily::uniform:
        return "uniform " + format_number(d.lower) + " " + format_number(d.upper);
    }
    return {};
}

namespace detail {

struct Field
{
    std::string_view key;
    std::function<void(Configuration&, const std::string&)> set;
    std::function<std::string(const Configuration&)> get;
};

inline Field number_field(std::string_view key, double StreetConfig::*member)
{
    return {key, [member](Configuration& c, const std::string& v) { c.street.*member = parse_number(v); },
            [member](const Configuration& c) { return format_number(c.street.*member); }};
}

inline Field dims_field(std::string_view key, VehicleDims StreetConfig::*vehicle, double VehicleDims::*member)
{
    return {key,
            [=](Configuration& c, const std::string& v) { (c.street.*vehicle).*member = parse_number(v); },
            [=](const Configuration& c) { return format_number((c.street.*vehicle).*member); }};
}

inline Field stochastic_field(std::string_view key, double StochasticConfig::*member)
{
    return {key, [member](Configuration& c, const std::string& v) { c.stochastic.*member = parse_number(v); },
            [member](const Configuration& c) { return format_number(c.stochastic.*member); }};
}

inline Field gap_field(std::string_view key, DistributionSpec StochasticConfig::*member)
{
    return {key, [member](Configuration& c, const std::string& v) { c.stochastic.*member = parse_distribution(v); },
            [member](const Configuration& c) { return format_distribution(c.stochastic.*member); }};
}

/// Every plain key, in file order.
inline const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        using S = StreetConfig;
        std::vector<Field> t{
            number_field("w_L", &S::w_L),
            number_field("w_S", &S::w_S),
            number_field("h_A", &S::h_A),
            number_field("d_I", &S::d_I),
            number_field("r_P", &S::r_P),
            number_field("h_P", &S::h_P),
            number_field("h_U", &S::h_U),
            number_field("h_C", &S::h_C),
            dims_field("car.length", &S::car, &VehicleDims::length),
            dims_field("car.width", &S::car, &VehicleDims::width),
            dims_field("car.height", &S::car, &VehicleDims::height),
            dims_field("bus.length", &S::bus, &VehicleDims::length),
            dims_field("bus.width", &S::bus, &VehicleDims::width),
            dims_field("bus.height", &S::bus, &VehicleDims::height),
            number_field("R", &S::R),
            number_field("f_c", &S::f_c),
            number_field("B", &S::B),
            number_field("P_A", &S::P_A),
            number_field("P_U", &S::P_U),
            number_field("P_C", &S::P_C),
            number_field("G_A", &S::G_A),
            number_field("G_U", &S::G_U),
            number_field("G_C", &S::G_C),
            number_field("noise_figure", &S::noise_figure),
        };
        t.push_back({"uplink", [](Configuration& c, const std::string& v) { c.street.uplink = parse_bool(v); },
                     [](const Configuration& c) { return std::string(c.street.uplink ? "true" : "false"); }});
        t.push_back({"relay_selection",
                     [](Configuration& c, const std::string& v) {
                         if (v == "nearest")
                             c.street.relay_selection = RelaySelection::nearest;
                         else if (v == "uniform_random")
                             c.street.relay_selection = RelaySelection::uniform_random;
                         else
                             throw ConfigError("relay_selection must be nearest or uniform_random");
                     },
                     [](const Configuration& c) {
                         return std::string(c.street.relay_selection == RelaySelection::nearest ? "nearest"
                                                                                                  : "uniform_random");
                     }});
        t.push_back(gap_field("pedestrian_gap", &StochasticConfig::pedestrian_gap));
        t.push_back(gap_field("vehicle_gap", &StochasticConfig::vehicle_gap));
        t.push_back(stochastic_field("p_T", &StochasticConfig::p_T));
        t.push_back(stochastic_field("p_R", &StochasticConfig::p_R));
        return t;
    }();
    return table;
}

inline const Field* find_field(std::string_view key)
{
    for (const auto& f : fields())
        if (f.key == key)
            return &f;
    return nullptr;
}

}  // namespace detail

/// Keys that are converted to gap distributions after all other keys, so
/// they see the final r_P, p_T and vehicle dimensions.
inline bool is_density_key(std::string_view key)
{
    return key == "pedestrian_density" || key == "vehicle_density";
}

inline bool is_config_key(std::string_view key)
{
    return is_density_key(key) || detail::find_field(key) != nullptr;
}

/// Applies `settings` on top of `base`. Unknown keys and malformed values
/// throw ConfigError naming the key.
inline Configuration apply_settings(Configuration base, const Settings& settings)
{
    std::optional<double> ped_density;
    std::optional<double> veh_density;
    for (const auto& [key, value] : settings) {
        try {
            if (key == "pedestrian_density")
                ped_density = parse_number(value);
            else if (key == "vehicle_density")
                veh_density = parse_number(value);
            else if (const auto* f = detail::find_field(key))
                f->set(base, value);
            else
                throw ConfigError("unknown key");
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    if (ped_density)
        base.stochastic.pedestrian_gap = density_to_pedestrian_gap(*ped_density, base.street.r_P);
    if (veh_density)
        base.stochastic.vehicle_gap =
            density_to_vehicle_gap(*veh_density, base.stochastic.p_T, base.street.car, base.street.bus);
    return base;
}

/// Reads `key = value` lines; `#` starts a comment.
inline Settings parse_settings(std::istream& in)
{
    Settings out;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(n) + ": expected key = value");
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(n) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline Settings parse_settings_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_settings(in);
}

inline Settings read_settings_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path);
    try {
        return parse_settings(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline Configuration load_configuration(const std::string& path)
{
    return apply_settings({}, read_settings_file(path));
}

/// Writes every plain key; reading the text back reproduces `c` exactly.
inline std::string format_configuration(const Configuration& c)
{
    std::string out;
    for (const auto& f : detail::fields()) {
        out += f.key;
        out += " = ";
        out += f.get(c);
        out += '\n';
    }
    return out;
}

}  // namespace vrelay
