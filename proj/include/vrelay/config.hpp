#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrelay {

/// Raised for inadmissible inputs that cannot be reported and skipped.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct VehicleDims
{
    double length;
    double width;
    double height;
};

enum class RelaySelection
{
    nearest,        // UE attaches to the closest COW in range
    uniform_random  // UE attaches to a COW drawn uniformly from those in range
};

/// Deterministic scenario parameters. Lengths in meters, f_c in GHz, B in Hz,
/// powers in dBm, gains and noise figure in dB.
///
/// Street cross-section used throughout: the AP line is y = 0 (between the two
/// central lanes), lane centers sit at +-w_L/2 and +-3w_L/2, sidewalks span
/// 2w_L <= |y| <= 2w_L + w_S. The UE stands on the sidewalk path at
/// y = 2w_L + 3w_S/4.
struct StreetConfig
{
    double w_L = 3.5;
    double w_S = 3.0;
    double h_A = 10.0;
    double d_I = 300.0;
    double r_P = 0.3;
    double h_P = 1.75;
    double h_U = 1.5;
    double h_C = 1.4;
    VehicleDims car{4.5, 1.8, 1.5};
    VehicleDims bus{12.0, 2.5, 3.2};
    double R = 50.0;
    double f_c = 28.0;
    double B = 1.0e9;
    double P_A = 33.0;
    double P_U = 23.0;
    double P_C = 30.0;
    double G_A = 27.0;
    double G_U = 15.0;
    double G_C = 24.0;
    double noise_figure = 10.0;
    // Uplink budgets use the UE and COW transmit powers, downlink the AP and COW.
    bool uplink = true;
    RelaySelection relay_selection = RelaySelection::nearest;
};

enum class GapFamily
{
    exponential,
    deterministic,
    uniform
};

/// Gap distribution of a 1-D renewal process, in meters. An exponential family
/// with infinite mean describes an empty process.
struct DistributionSpec
{
    GapFamily family = GapFamily::exponential;
    double lower = 0.0;  // uniform only
    double upper = 0.0;  // uniform only
    double value = 1.0;  // mean (exponential) or constant (deterministic)

    static DistributionSpec exponential(double mean) { return {GapFamily::exponential, 0.0, 0.0, mean}; }
    static DistributionSpec deterministic(double gap) { return {GapFamily::deterministic, 0.0, 0.0, gap}; }
    static DistributionSpec uniform(double lo, double hi) { return {GapFamily::uniform, lo, hi, 0.5 * (lo + hi)}; }
    static DistributionSpec empty() { return exponential(std::numeric_limits<double>::infinity()); }

    double mean() const { return family == GapFamily::uniform ? 0.5 * (lower + upper) : value; }

    bool operator==(const DistributionSpec&) const = default;
};

struct StochasticConfig
{
    DistributionSpec pedestrian_gap = DistributionSpec::exponential(10.0 / 3.0);  // 0.5 humans/m^2
    DistributionSpec vehicle_gap = DistributionSpec::exponential(20.0);
    double p_T = 0.05;
    double p_R = 0.3;
};

using ValidationReport = std::vector<std::string>;

namespace detail {

inline void check_spec(const DistributionSpec& spec, const std::string& name, ValidationReport& out)
{
    if (!(spec.mean() > 0.0))
        out.push_back(name + ": mean > 0");
    if (spec.family == GapFamily::uniform && !(spec.lower >= 0.0 && spec.lower < spec.upper))
        out.push_back(name + ": 0 <= lower < upper");
    if (spec.family != GapFamily::exponential && !std::isfinite(spec.mean()))
        out.push_back(name + ": finite mean");
}

}  // namespace detail

/// Lists every violated invariant; an empty report means the pair is admissible.
inline ValidationReport validate(const StreetConfig& cfg, const StochasticConfig& sto)
{
    ValidationReport out;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0))
            out.push_back(std::string(name) + " > 0");
    };
    positive(cfg.w_L, "w_L");
    positive(cfg.w_S, "w_S");
    positive(cfg.h_A, "h_A");
    positive(cfg.d_I, "d_I");
    positive(cfg.r_P, "r_P");
    positive(cfg.h_P, "h_P");
    positive(cfg.h_U, "h_U");
    positive(cfg.h_C, "h_C");
    positive(cfg.car.length, "car.length");
    positive(cfg.car.width, "car.width");
    positive(cfg.car.height, "car.height");
    positive(cfg.bus.length, "bus.length");
    positive(cfg.bus.width, "bus.width");
    positive(cfg.bus.height, "bus.height");
    positive(cfg.R, "R");
    positive(cfg.f_c, "f_c");
    positive(cfg.B, "B");

    if (!(cfg.h_C < cfg.h_U))
        out.push_back("h_C < h_U");
    if (!(cfg.h_U < cfg.h_P))
        out.push_back("h_U < h_P");
    if (!(cfg.h_P < cfg.h_A))
        out.push_back("h_P < h_A");
    if (!(cfg.G_U <= cfg.G_C && cfg.G_C <= cfg.G_A))
        out.push_back("G_U <= G_C <= G_A");
    if (!(cfg.bus.width < 3.0 * cfg.w_L))
        out.push_back("w_T < 3 w_L");
    if (!(cfg.car.width <= cfg.w_L && cfg.bus.width <= cfg.w_L))
        out.push_back("vehicle width <= w_L");

    detail::check_spec(sto.pedestrian_gap, "pedestrian_gap", out);
    detail::check_spec(sto.vehicle_gap, "vehicle_gap", out);
    if (!(sto.p_T >= 0.0 && sto.p_T <= 1.0))
        out.push_back("p_T in [0,1]");
    if (!(sto.p_R >= 0.0 && sto.p_R <= 1.0))
        out.push_back("p_R in [0,1]");
    return out;
}

/// Sidewalk crowd density (humans per m^2) to the gap between pedestrians on
/// one path. A path stands for the walkers whose centers fall within one body
/// width of it, so it carries 2 r_P rho_h pedestrians per meter.
inline DistributionSpec density_to_pedestrian_gap(double rho_h, double r_P)
{
    if (!(rho_h > 0.0))
        throw ConfigError("pedestrian density must be positive");
    if (!(r_P > 0.0))
        throw ConfigError("body radius must be positive");
    return DistributionSpec::exponential(1.0 / (2.0 * r_P * rho_h));
}

/// Inverse of density_to_pedestrian_gap: crowd density (humans per m^2)
/// represented by paths with the given mean gap. 0 for an empty process.
inline double pedestrian_area_density(const DistributionSpec& gap, double r_P)
{
    const double mean = gap.mean();
    if (!std::isfinite(mean))
        return 0.0;
    return 1.0 / (2.0 * r_P * mean);
}

/// Vehicles per 100 m of one lane to the bumper-to-bumper gap.
inline DistributionSpec density_to_vehicle_gap(double rho_v, double p_T, const VehicleDims& car,
                                               const VehicleDims& bus)
{
    if (!(rho_v > 0.0))
        throw ConfigError("vehicle density must be positive");
    const double footprint = p_T * bus.length + (1.0 - p_T) * car.length;
    const double gap = 100.0 / rho_v - footprint;
    if (!(gap > 0.0))
        throw ConfigError("jam density: vehicles per 100 m exceed 100 / mean vehicle length");
    return DistributionSpec::exponential(gap);
}

}  // namespace vrelay
