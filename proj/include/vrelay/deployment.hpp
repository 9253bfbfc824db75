#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "blockage.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "scenario.hpp"

namespace vrelay {

enum class PedestrianPlacement
{
    on_paths,
    uniform_on_sidewalks
};

enum class VehicleLateral
{
    centered,
    jittered
};

enum class BlockingFaces
{
    facing_only,
    all_faces
};

struct SimulationMode
{
    PedestrianPlacement pedestrian_placement = PedestrianPlacement::on_paths;
    VehicleLateral vehicle_lateral = VehicleLateral::centered;
    BlockingFaces blocking_faces = BlockingFaces::facing_only;

    /// The assumptions the closed forms are built on.
    static SimulationMode analytic()
    {
        return {PedestrianPlacement::on_paths, VehicleLateral::centered, BlockingFaces::facing_only};
    }
    /// Crowd spread over the sidewalks, vehicles shifted within their lanes,
    /// exact 3-D occlusion.
    static SimulationMode relaxed()
    {
        return {PedestrianPlacement::uniform_on_sidewalks, VehicleLateral::jittered, BlockingFaces::all_faces};
    }

    bool operator==(const SimulationMode&) const = default;
};

enum class VehicleKind
{
    car,
    bus
};

struct Vehicle
{
    Box body;
    VehicleKind kind;
    bool is_cow;

    /// Antenna sits on the roof center at the COW height.
    Vec3 antenna(double h_C) const { return {0.5 * (body.x_lo + body.x_hi), 0.5 * (body.y_lo + body.y_hi), h_C}; }
};

struct Lane
{
    double center;
    std::vector<Vehicle> vehicles;
};

/// One random snapshot of the street. The sampler may fill only the portion
/// of the street that can interact with the links under study.
struct DeploymentInstance
{
    std::vector<Cylinder> pedestrians;
    std::vector<Lane> lanes;
    Vec3 ue;
    std::vector<Vec3> aps;
    std::uint64_t rng_seed = 0;

    void clear()
    {
        pedestrians.clear();
        for (auto& lane : lanes)
            lane.vehicles.clear();
    }
};

/// Which blocker populations a link can meet.
struct BlockerScope
{
    bool pedestrians = true;
    bool vehicles = true;
};

// Street cross-section. Only the half with y > 0 holds links; the mirrored
// half exists in full-street deployments.

inline std::array<double, 4> lane_centers(const StreetConfig& s)
{
    return {-1.5 * s.w_L, -0.5 * s.w_L, 0.5 * s.w_L, 1.5 * s.w_L};
}

inline constexpr std::size_t kNearCentralLane = 2;
inline constexpr std::size_t kNearSideLane = 3;

inline double inner_path_offset(const StreetConfig& s)
{
    return 2.0 * s.w_L + 0.25 * s.w_S;
}

inline Vec3 ue_position(const StreetConfig& s, double x0)
{
    return {x0, ue_lateral_offset(s), s.h_U};
}

inline Vec3 ap_position(const StreetConfig& s)
{
    return {0.0, 0.0, s.h_A};
}

namespace detail {

using Window = std::pair<double, double>;

inline std::optional<Window> hull(std::optional<Window> a, const std::optional<Window>& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return Window{std::min(a->first, b->first), std::max(a->second, b->second)};
}

/// x-range over which a link crosses the lateral band [y_lo, y_hi] below
/// `max_height`, widened by `pad`.
inline std::optional<Window> crossing_window(const Vec3& a, const Vec3& b, double y_lo, double y_hi,
                                             double max_height, double pad)
{
    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_slab(a.y, b.y - a.y, y_lo, y_hi, t0, t1))
        return std::nullopt;
    if (!clip_slab(a.z, b.z - a.z, -1.0, max_height, t0, t1))
        return std::nullopt;
    const double xa = a.x + t0 * (b.x - a.x);
    const double xb = a.x + t1 * (b.x - a.x);
    return Window{std::min(xa, xb) - pad, std::max(xa, xb) + pad};
}

/// x-range of the UE sidewalk in which a pedestrian can block the link a-b.
inline std::optional<Window> pedestrian_window(const StreetConfig& s, const Vec3& a, const Vec3& b,
                                               BlockingFaces faces)
{
    const Vec3& lo = a.z <= b.z ? a : b;
    const Vec3& hi = a.z <= b.z ? b : a;
    const double band_lo = 2.0 * s.w_L - s.r_P;
    const double band_hi = 2.0 * s.w_L + s.w_S + s.r_P;
    const double dy = std::abs(hi.y - lo.y);
    const double dxy = std::hypot(hi.x - lo.x, hi.y - lo.y);
    // Longitudinal slack of a radius-wide strip around the link projection.
    const double slack = s.r_P * (dy > 0.0 ? dxy / dy : 1.0) + s.r_P + 1.0;
    if (faces == BlockingFaces::all_faces)
        return crossing_window(lo, hi, band_lo, band_hi, s.h_P, slack);
    if (lo.z >= s.h_P)
        return std::nullopt;
    double y_lo = band_lo;
    double y_hi = band_hi;
    if (hi.z > s.h_P) {
        const double reach = s.r_P + dy * (s.h_P - lo.z) / (hi.z - lo.z);
        y_lo = std::max(y_lo, lo.y - reach);
        y_hi = std::min(y_hi, lo.y + reach);
        if (!(y_lo <= y_hi))
            return std::nullopt;
    }
    return crossing_window(lo, hi, y_lo, y_hi, 1e300, slack);
}

inline void push_pedestrian(const StreetConfig& s, double x, double y, std::vector<Cylinder>& out)
{
    out.push_back({x, y, s.r_P, s.h_P});
}

}  // namespace detail

/// Pedestrians of a stationary renewal path at lateral position y over [lo, hi].
inline void sample_path(Rng& rng, const Scenario& scn, double y, double lo, double hi, std::vector<Cylinder>& out)
{
    const auto& gap = scn.pedestrian_gap();
    if (gap.is_empty() || !(lo < hi))
        return;
    for (double x = lo + gap.sample_equilibrium(rng); x <= hi; x += gap.sample(rng))
        detail::push_pedestrian(scn.street(), x, y, out);
}

/// Pedestrians of a path seen from one of its own points at `anchor` (the
/// anchor itself is not emitted): i.i.d. gaps in both directions.
inline void sample_path_from(Rng& rng, const Scenario& scn, double y, double anchor, double lo, double hi,
                             std::vector<Cylinder>& out)
{
    const auto& gap = scn.pedestrian_gap();
    if (gap.is_empty())
        return;
    for (double x = anchor + gap.sample(rng); x <= hi; x += gap.sample(rng))
        detail::push_pedestrian(scn.street(), x, y, out);
    for (double x = anchor - gap.sample(rng); x >= lo; x -= gap.sample(rng))
        detail::push_pedestrian(scn.street(), x, y, out);
}

/// Poisson crowd on the sidewalk band [y_lo, y_hi] x [lo, hi] with the area
/// density the paths carry.
inline void sample_crowd(Rng& rng, const Scenario& scn, double y_lo, double y_hi, double lo, double hi,
                         std::vector<Cylinder>& out)
{
    const double rho = pedestrian_area_density(scn.stochastic().pedestrian_gap, scn.street().r_P);
    if (!(rho > 0.0) || !(lo < hi))
        return;
    const double mean_spacing = 1.0 / (rho * (y_hi - y_lo));
    for (double x = lo + exponential(rng, mean_spacing); x <= hi; x += exponential(rng, mean_spacing))
        detail::push_pedestrian(scn.street(), x, uniform(rng, y_lo, y_hi), out);
}

namespace detail {

inline VehicleKind draw_kind(Rng& rng, double p_T)
{
    return bernoulli(rng, p_T) ? VehicleKind::bus : VehicleKind::car;
}

inline Vehicle make_vehicle(Rng& rng, const Scenario& scn, VehicleKind kind, double lane_center, double x_lo,
                            const SimulationMode& mode)
{
    const auto& s = scn.street();
    const VehicleDims& d = kind == VehicleKind::bus ? s.bus : s.car;
    double center = lane_center;
    if (mode.vehicle_lateral == VehicleLateral::jittered) {
        const double slack = 0.5 * std::max(0.0, s.w_L - d.width);
        center += uniform(rng, -slack, slack);
    }
    const bool cow = kind == VehicleKind::car && bernoulli(rng, scn.stochastic().p_R);
    return {{x_lo, x_lo + d.length, center - 0.5 * d.width, center + 0.5 * d.width, d.height}, kind, cow};
}

inline double vehicle_length(const StreetConfig& s, VehicleKind kind)
{
    return kind == VehicleKind::bus ? s.bus.length : s.car.length;
}

}  // namespace detail

/// Vehicles of a stationary lane covering [lo, hi]; the first one may start
/// before lo.
inline void sample_lane(Rng& rng, const Scenario& scn, double lane_center, double lo, double hi,
                        const SimulationMode& mode, std::vector<Vehicle>& out)
{
    const auto& s = scn.street();
    const auto& sto = scn.stochastic();
    const auto& gap = scn.vehicle_gap();
    if (gap.is_empty() || !(lo < hi))
        return;
    const double mean_length = sto.p_T * s.bus.length + (1.0 - sto.p_T) * s.car.length;
    double x;
    if (bernoulli(rng, mean_length / (mean_length + gap.mean()))) {
        // lo falls inside a vehicle: length-biased kind, uniform phase.
        const auto kind = bernoulli(rng, sto.p_T * s.bus.length / mean_length) ? VehicleKind::bus : VehicleKind::car;
        const double start = lo - uniform01(rng) * detail::vehicle_length(s, kind);
        out.push_back(detail::make_vehicle(rng, scn, kind, lane_center, start, mode));
        x = out.back().body.x_hi + gap.sample(rng);
    } else {
        x = lo + gap.sample_equilibrium(rng);
    }
    while (x <= hi) {
        const auto kind = detail::draw_kind(rng, sto.p_T);
        out.push_back(detail::make_vehicle(rng, scn, kind, lane_center, x, mode));
        x = out.back().body.x_hi + gap.sample(rng);
    }
}

/// Vehicles following a given vehicle toward decreasing x, down to `lo`.
inline void sample_lane_behind(Rng& rng, const Scenario& scn, double lane_center, double front_edge, double lo,
                               const SimulationMode& mode, std::vector<Vehicle>& out)
{
    const auto& gap = scn.vehicle_gap();
    if (gap.is_empty())
        return;
    for (double x = front_edge - gap.sample(rng); x >= lo;) {
        const auto kind = detail::draw_kind(rng, scn.stochastic().p_T);
        const double length = detail::vehicle_length(scn.street(), kind);
        out.push_back(detail::make_vehicle(rng, scn, kind, lane_center, x - length, mode));
        x = out.back().body.x_lo - gap.sample(rng);
    }
}

/// Full street of length 5 d_I centered on the UE's AP, every path, sidewalk
/// and lane populated from its stationary law. The UE is a pedestrian of the
/// outer path of the y > 0 sidewalk, uniform on [0, d_I / 2].
inline DeploymentInstance sample_deployment(const Scenario& scn, const SimulationMode& mode, std::uint64_t seed)
{
    const auto& s = scn.street();
    Rng rng = make_stream(seed, 0);
    DeploymentInstance inst;
    inst.rng_seed = seed;
    const double lo = -2.5 * s.d_I;
    const double hi = 2.5 * s.d_I;
    for (int k = -2; k <= 2; ++k)
        inst.aps.push_back({k * s.d_I, 0.0, s.h_A});
    inst.ue = ue_position(s, uniform(rng, 0.0, 0.5 * s.d_I));

    for (double side : {1.0, -1.0}) {
        if (mode.pedestrian_placement == PedestrianPlacement::on_paths) {
            const double inner = side * inner_path_offset(s);
            const double outer = side * ue_lateral_offset(s);
            sample_path(rng, scn, inner, lo, hi, inst.pedestrians);
            if (side > 0.0)
                sample_path_from(rng, scn, outer, inst.ue.x, lo, hi, inst.pedestrians);
            else
                sample_path(rng, scn, outer, lo, hi, inst.pedestrians);
        } else {
            const double a = side * 2.0 * s.w_L;
            const double b = side * (2.0 * s.w_L + s.w_S);
            sample_crowd(rng, scn, std::min(a, b), std::max(a, b), lo, hi, inst.pedestrians);
        }
    }
    for (double center : lane_centers(s)) {
        Lane lane{center, {}};
        sample_lane(rng, scn, center, lo, hi, mode, lane.vehicles);
        inst.lanes.push_back(std::move(lane));
    }
    return inst;
}

/// Is the open segment a-b occluded? Solids that contain an endpoint belong
/// to that node and are skipped, except pedestrians under the footprint
/// rule, which never see the UE as a body.
inline bool is_blocked(const DeploymentInstance& inst, const Vec3& a, const Vec3& b, const SimulationMode& mode,
                       BlockerScope scope = {})
{
    const bool facing = mode.blocking_faces == BlockingFaces::facing_only;
    const Vec3& lo = a.z <= b.z ? a : b;
    const Vec3& hi = a.z <= b.z ? b : a;
    if (scope.pedestrians) {
        for (const auto& c : inst.pedestrians) {
            if (facing) {
                if (footprint_blocks(lo, hi, c))
                    return true;
            } else if (!contains(c, a) && !contains(c, b) && segment_hits(a, b, c)) {
                return true;
            }
        }
    }
    if (scope.vehicles) {
        for (const auto& lane : inst.lanes) {
            for (const auto& v : lane.vehicles) {
                if (contains(v.body, a) || contains(v.body, b))
                    continue;
                if (facing ? facing_side_blocks(lo, hi, v.body) : segment_hits(a, b, v.body))
                    return true;
            }
        }
    }
    return false;
}

}  // namespace vrelay
