#pragma once

#include <algorithm>
#include <cmath>

#include "config.hpp"
#include "distribution.hpp"
#include "scenario.hpp"

namespace vrelay {

/// Ground-plane geometry of a UE-AP link with longitudinal separation x0.
struct UeApGeometry
{
    double x0;
    double w_H;        // lateral UE-AP offset, 2w_L + 3w_S/4
    double d_2D;       // horizontal UE-AP distance
    double sin_alpha;  // sine of the angle between the link projection and the paths
    double z;          // r_P / sin(alpha): path length whose pedestrians cut the link
    double w_U;        // sidewalk width below which the far path cannot block
    double l_B;        // blockage-zone length
};

struct BlockageProfile
{
    double p_human;
    double p_vehicle;
    double p_joint;
};

inline double ue_lateral_offset(const StreetConfig& s)
{
    return 2.0 * s.w_L + 0.75 * s.w_S;
}

/// Lateral UE-COW offset: UE path to the center of the adjacent side lane.
inline double ue_cow_lateral_offset(const StreetConfig& s)
{
    return 0.75 * s.w_S + 0.5 * s.w_L;
}

/// Fraction of the horizontal UE-AP distance over which a pedestrian's head
/// is above the ray.
inline double pedestrian_height_ratio(const StreetConfig& s)
{
    return (s.h_P - s.h_U) / (s.h_A - s.h_U);
}

inline UeApGeometry ue_ap_geometry(const StreetConfig& s, double x0)
{
    UeApGeometry g{};
    g.x0 = x0;
    g.w_H = ue_lateral_offset(s);
    g.d_2D = std::hypot(g.w_H, x0);
    g.sin_alpha = g.w_H / g.d_2D;
    // r_P sqrt((8w_L + 3w_S)^2 + 16 x0^2) / (8w_L + 3w_S)
    const double k = 8.0 * s.w_L + 3.0 * s.w_S;
    g.z = s.r_P * std::sqrt(k * k + 16.0 * x0 * x0) / k;
    g.w_U = 2.0 * s.r_P + g.w_H * pedestrian_height_ratio(s);
    g.l_B = s.r_P + g.d_2D * pedestrian_height_ratio(s);
    return g;
}

/// True when the blockage zone of a UE-AP link reaches the second path of the
/// UE's sidewalk: w_S <= 2r_P + 2w_H (h_P - h_U) / (h_A - h_U).
inline bool other_path_reachable(const StreetConfig& s)
{
    return s.w_S <= 2.0 * s.r_P + 2.0 * ue_lateral_offset(s) * pedestrian_height_ratio(s);
}

/// Same-path human blockage: the nearest pedestrian ahead is within the cut.
inline double human_blockage_same_path(const Scenario& scn, double x0)
{
    return scn.pedestrian_gap().cdf(ue_ap_geometry(scn.street(), x0).z);
}

/// Other-path human blockage: a pedestrian inside the 2z window the link cuts.
inline double human_blockage_other_path(const Scenario& scn, double x0)
{
    if (!other_path_reachable(scn.street()))
        return 0.0;
    return renewal_coverage_probability(scn.pedestrian_gap(), 2.0 * ue_ap_geometry(scn.street(), x0).z);
}

/// Human blockage of the UE-AP link; the two paths block independently.
inline double human_blockage_ue_ap(const Scenario& scn, double x0)
{
    const double p1 = human_blockage_same_path(scn, x0);
    const double p2 = human_blockage_other_path(scn, x0);
    return p1 + (1.0 - p1) * p2;
}

/// Lowest side-lane bus that cuts a UE-AP link. Independent of x0.
inline double min_blocking_bus_height_ue_ap(const StreetConfig& s)
{
    return s.h_U + (3.0 * s.w_S + 2.0 * s.w_L - 2.0 * s.bus.width) * (s.h_A - s.h_U) / (8.0 * s.w_L + 3.0 * s.w_S);
}

/// Share of a lane covered by buses, l_T / (l_T + E[D_B]).
inline double bus_occupancy(const Scenario& scn)
{
    const double mean_gap = scn.bus_gap().mean();
    if (!std::isfinite(mean_gap))
        return 0.0;
    const double l_T = scn.street().bus.length;
    return l_T / (l_T + mean_gap);
}

/// Vehicle blockage of the UE-AP link.
inline double vehicle_blockage_ue_ap(const Scenario& scn)
{
    if (scn.street().bus.height < min_blocking_bus_height_ue_ap(scn.street()))
        return 0.0;
    return bus_occupancy(scn);
}

/// The four-case closed form of the UE-AP blockage probability, written out
/// branch by branch.
inline double joint_blockage_ue_ap_expanded(const Scenario& scn, double x0)
{
    const auto& s = scn.street();
    const auto& sto = scn.stochastic();
    const auto g = ue_ap_geometry(s, x0);
    const double F = scn.pedestrian_gap().cdf(g.z);
    const double mean_L = scn.pedestrian_gap().mean();
    const double cover = std::isfinite(mean_L) ? scn.pedestrian_gap().survival_integral(2.0 * g.z) / mean_L : 0.0;
    const bool tall = s.bus.height >= min_blocking_bus_height_ue_ap(s);
    const bool narrow = s.w_S <= 2.0 * s.r_P + (s.h_P - s.h_U) * (8.0 * s.w_L + 3.0 * s.w_S) / (2.0 * (s.h_A - s.h_U));
    const double E_D = scn.vehicle_gap().mean();
    const double num = s.car.length - sto.p_T * s.car.length + E_D;
    const double den = sto.p_T * s.bus.length + (1.0 - sto.p_T) * s.car.length + E_D;
    if (!tall && narrow)
        return F + (1.0 - F) * cover;
    if (!tall)
        return F;
    if (narrow)
        return 1.0 - num * (1.0 - F - (1.0 - F) * cover) / den;
    return 1.0 - num * (1.0 - F) / den;
}

/// Human and vehicle blockage and their independent combination.
inline BlockageProfile joint_blockage_ue_ap(const Scenario& scn, double x0)
{
    BlockageProfile b{};
    b.p_human = human_blockage_ue_ap(scn, x0);
    b.p_vehicle = vehicle_blockage_ue_ap(scn);
    b.p_joint = 1.0 - (1.0 - b.p_human) * (1.0 - b.p_vehicle);
    return b;
}

/// x_R: longitudinal half-window of COW coverage; 0 when R does not reach
/// the side lane.
inline double cow_window_half_length(const StreetConfig& s)
{
    const double lateral = ue_cow_lateral_offset(s);
    if (!(s.R > lateral))
        return 0.0;
    return std::sqrt(s.R * s.R - lateral * lateral);
}

/// Coverage: at least one COW of the adjacent side lane within [x0 - x_R, x0 + x_R].
inline double cow_coverage_probability(const Scenario& scn)
{
    const double x_R = cow_window_half_length(scn.street());
    return renewal_coverage_probability(scn.relay_spacing(), 2.0 * x_R);
}

/// z_1 for a UE-COW link with longitudinal offset x_S.
inline double ue_cow_cut_length(const StreetConfig& s, double x_S)
{
    const double k = 2.0 * s.w_L + 3.0 * s.w_S;
    return s.r_P * std::sqrt(k * k + 16.0 * x_S * x_S) / k;
}

/// p*_B: both sidewalk paths always cross the UE-COW link since h_C < h_U.
inline double human_blockage_ue_cow(const Scenario& scn, double x_S)
{
    const double z1 = ue_cow_cut_length(scn.street(), x_S);
    const double F = scn.pedestrian_gap().cdf(z1);
    return F + (1.0 - F) * renewal_coverage_probability(scn.pedestrian_gap(), 2.0 * z1);
}

/// Lowest central-lane bus that cuts a COW-AP link.
inline double min_blocking_bus_height_cow_ap(const StreetConfig& s)
{
    return s.h_C + (2.0 * s.w_L - s.bus.width) * (s.h_A - s.h_C) / (3.0 * s.w_L);
}

/// COW-AP blockage by a bus in the neighboring lane.
inline double cow_ap_neighbor_lane_blockage(const Scenario& scn)
{
    if (scn.street().bus.height < min_blocking_bus_height_cow_ap(scn.street()))
        return 0.0;
    return bus_occupancy(scn);
}

/// How far ahead of the COW a same-lane bus still intercepts the ray.
inline double cow_ap_blockage_zone_length(const StreetConfig& s, double x1)
{
    const double vertical = (s.bus.height - s.h_C) / (s.h_A - s.h_C);
    const double lateral = s.bus.width / (3.0 * s.w_L);
    return std::abs(x1) * std::max(0.0, std::min(vertical, lateral));
}

/// COW-AP blockage by a bus ahead in the COW's own lane.
inline double cow_ap_same_lane_blockage(const Scenario& scn, double x1)
{
    const auto& s = scn.street();
    return scn.bus_gap().cdf(cow_ap_blockage_zone_length(s, x1) - 0.5 * s.car.length);
}

/// COW-AP blockage; the two lanes block independently.
inline double joint_blockage_cow_ap(const Scenario& scn, double x1)
{
    const double pn = cow_ap_neighbor_lane_blockage(scn);
    const double ps = cow_ap_same_lane_blockage(scn, x1);
    return 1.0 - (1.0 - pn) * (1.0 - ps);
}

/// The same quantity as a two-case closed form.
inline double joint_blockage_cow_ap_expanded(const Scenario& scn, double x1)
{
    const auto& s = scn.street();
    const auto& sto = scn.stochastic();
    const double F = cow_ap_same_lane_blockage(scn, x1);
    if (s.bus.height < min_blocking_bus_height_cow_ap(s))
        return F;
    const double share =
        sto.p_T * s.bus.length / (sto.p_T * s.bus.length + (1.0 - sto.p_T) * s.car.length + scn.vehicle_gap().mean());
    return 1.0 - (1.0 - share) * (1.0 - F);
}

}  // namespace vrelay
