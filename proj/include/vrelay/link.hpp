#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "blockage.hpp"
#include "config.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"

namespace vrelay {

enum class LinkClass
{
    ue_ap,
    ue_cow,
    cow_ap
};

inline std::string_view to_string(LinkClass c)
{
    switch (c) {
    case LinkClass::ue_ap:
        return "ue_ap";
    case LinkClass::ue_cow:
        return "ue_cow";
    case LinkClass::cow_ap:
        return "cow_ap";
    }
    return "?";
}

/// Conditional SNRs of one link, linear scale.
struct LinkBudget
{
    double S_L;
    double S_N;
    double d_3D;
    LinkClass link_class;
};

/// Urban-micro street-canyon pathloss in dB.
inline double pathloss_db(double d_3D, double f_c, bool los)
{
    if (!(d_3D > 0.0))
        throw std::invalid_argument("pathloss: 3-D distance must be positive");
    const double exponent = los ? 21.0 : 31.9;
    return 32.4 + exponent * std::log10(d_3D) + 20.0 * std::log10(f_c);
}

/// N0(B) = -174 dBm/Hz + 10 log10(B) + NF.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db)
{
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

inline double spectral_efficiency(double snr)
{
    return std::log2(1.0 + snr);
}

namespace detail {

struct LinkGeometry
{
    double lateral;
    double vertical;
    double power_dbm;
    double gains_db;
};

inline LinkGeometry link_geometry(const StreetConfig& s, LinkClass c)
{
    switch (c) {
    case LinkClass::ue_ap:
        return {ue_lateral_offset(s), s.h_A - s.h_U, s.uplink ? s.P_U : s.P_A, s.G_A + s.G_U};
    case LinkClass::ue_cow:
        return {ue_cow_lateral_offset(s), s.h_U - s.h_C, s.uplink ? s.P_U : s.P_C, s.G_U + s.G_C};
    case LinkClass::cow_ap:
        return {1.5 * s.w_L, s.h_A - s.h_C, s.uplink ? s.P_C : s.P_A, s.G_C + s.G_A};
    }
    throw std::invalid_argument("unknown link class");
}

}  // namespace detail

inline double link_distance_3d(const StreetConfig& s, LinkClass c, double longitudinal)
{
    const auto g = detail::link_geometry(s, c);
    return std::sqrt(longitudinal * longitudinal + g.lateral * g.lateral + g.vertical * g.vertical);
}

inline LinkBudget link_budget(const StreetConfig& s, LinkClass c, double longitudinal)
{
    const auto g = detail::link_geometry(s, c);
    const double d = link_distance_3d(s, c, longitudinal);
    const double budget = g.power_dbm + g.gains_db - noise_power_dbm(s.B, s.noise_figure);
    LinkBudget out{};
    out.d_3D = d;
    out.link_class = c;
    out.S_L = std::pow(10.0, (budget - pathloss_db(d, s.f_c, true)) / 10.0);
    out.S_N = std::pow(10.0, (budget - pathloss_db(d, s.f_c, false)) / 10.0);
    return out;
}

/// p log2(1 + S_N) + (1 - p) log2(1 + S_L).
inline double mean_se(const LinkBudget& b, double p_blocked)
{
    return p_blocked * spectral_efficiency(b.S_N) + (1.0 - p_blocked) * spectral_efficiency(b.S_L);
}

/// Mean SE of the direct link.
inline double mean_se_ue_ap(const Scenario& scn, double x0)
{
    return mean_se(link_budget(scn.street(), LinkClass::ue_ap, x0), joint_blockage_ue_ap(scn, x0).p_joint);
}

/// Mean SE of the UE-COW hop.
inline double mean_se_ue_cow(const Scenario& scn, double x_S)
{
    return mean_se(link_budget(scn.street(), LinkClass::ue_cow, x_S), human_blockage_ue_cow(scn, x_S));
}

/// Mean SE of the COW-AP hop.
inline double mean_se_cow_ap(const Scenario& scn, double x1)
{
    return mean_se(link_budget(scn.street(), LinkClass::cow_ap, x1), joint_blockage_cow_ap(scn, x1));
}

/// E[C] = (2 / d_I) int_0^{d_I/2} C(x0) dx0.
inline double mean_se_baseline(const Scenario& scn, double rel_tol = 1e-6)
{
    const double half = 0.5 * scn.street().d_I;
    return integrate([&](double x0) { return mean_se_ue_ap(scn, x0); }, 0.0, half, rel_tol) / half;
}

}  // namespace vrelay
