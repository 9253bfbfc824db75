#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "deployment.hpp"
#include "link.hpp"
#include "strategy.hpp"

namespace vrelay {

enum class QuantityKind
{
    ue_ap_human,
    ue_ap_vehicle,
    ue_ap_joint,
    cow_coverage,
    ue_cow,
    cow_ap,
    mean_se         // mean SE of a strategy, UE uniform on [0, d_I / 2]
};

/// What a simulation run measures; `position` is x0, x_S or x1 as the kind
/// requires.
struct Quantity
{
    QuantityKind kind = QuantityKind::ue_ap_joint;
    double position = 0.0;
    Strategy strategy = Strategy::baseline;

    static Quantity ue_ap_human(double x0) { return {QuantityKind::ue_ap_human, x0}; }
    static Quantity ue_ap_vehicle(double x0) { return {QuantityKind::ue_ap_vehicle, x0}; }
    static Quantity ue_ap_joint(double x0) { return {QuantityKind::ue_ap_joint, x0}; }
    static Quantity cow_coverage() { return {QuantityKind::cow_coverage, 0.0}; }
    static Quantity ue_cow(double x_S) { return {QuantityKind::ue_cow, x_S}; }
    static Quantity cow_ap(double x1) { return {QuantityKind::cow_ap, x1}; }
    static Quantity mean_se(Strategy s) { return {QuantityKind::mean_se, 0.0, s}; }
};

/// Closed-form counterpart of a simulated quantity.
inline double analytic_value(const Scenario& scn, const Quantity& q)
{
    switch (q.kind) {
    case QuantityKind::ue_ap_human:
        return joint_blockage_ue_ap(scn, q.position).p_human;
    case QuantityKind::ue_ap_vehicle:
        return joint_blockage_ue_ap(scn, q.position).p_vehicle;
    case QuantityKind::ue_ap_joint:
        return joint_blockage_ue_ap(scn, q.position).p_joint;
    case QuantityKind::cow_coverage:
        return cow_coverage_probability(scn);
    case QuantityKind::ue_cow:
        return human_blockage_ue_cow(scn, q.position);
    case QuantityKind::cow_ap:
        return joint_blockage_cow_ap(scn, q.position);
    case QuantityKind::mean_se:
        return mean_se_strategy(scn, q.strategy);
    }
    throw std::invalid_argument("unknown quantity");
}

struct SimEstimate
{
    double mean = 0.0;
    double half_width_95 = 0.0;
    std::uint64_t n_drops = 0;
};

/// Drops per independently seeded block; the block layout, not the thread
/// count, fixes the random streams.
inline constexpr std::uint64_t kDropsPerBlock = 4096;

namespace detail {

template <std::size_t N>
struct Moments
{
    std::array<double, N> sum{};
    std::array<double, N> sum_sq{};
};

/// Runs `n_drops` drops of `drop(rng, workspace) -> std::array<double, N>`
/// over `threads` workers and aggregates block sums in block order, so the
/// result does not depend on scheduling.
template <std::size_t N, class Drop>
std::array<SimEstimate, N> run_drops(Drop drop, std::uint64_t n_drops, std::uint64_t seed, unsigned threads)
{
    if (n_drops == 0)
        throw std::invalid_argument("estimate: n_drops must be at least 1");
    const std::uint64_t blocks = (n_drops + kDropsPerBlock - 1) / kDropsPerBlock;
    std::vector<Moments<N>> partial(blocks);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&] {
        DeploymentInstance ws;
        for (std::uint64_t b = next++; b < blocks; b = next++) {
            Rng rng = make_stream(seed, b);
            const std::uint64_t begin = b * kDropsPerBlock;
            const std::uint64_t end = std::min(n_drops, begin + kDropsPerBlock);
            Moments<N> m;
            for (std::uint64_t i = begin; i < end; ++i) {
                const std::array<double, N> v = drop(rng, ws);
                for (std::size_t c = 0; c < N; ++c) {
                    m.sum[c] += v[c];
                    m.sum_sq[c] += v[c] * v[c];
                }
            }
            partial[b] = m;
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    Moments<N> total;
    for (const auto& m : partial) {
        for (std::size_t c = 0; c < N; ++c) {
            total.sum[c] += m.sum[c];
            total.sum_sq[c] += m.sum_sq[c];
        }
    }
    std::array<SimEstimate, N> out;
    const double n = static_cast<double>(n_drops);
    for (std::size_t c = 0; c < N; ++c) {
        const double mean = total.sum[c] / n;
        const double var = n > 1.0 ? std::max(0.0, (total.sum_sq[c] - n * mean * mean) / (n - 1.0)) : 0.0;
        out[c] = {mean, 1.959963984540054 * std::sqrt(var / n), n_drops};
    }
    return out;
}

inline double max_vehicle_height(const StreetConfig& s)
{
    return std::max(s.car.height, s.bus.height);
}

inline double max_vehicle_length(const StreetConfig& s)
{
    return std::max(s.car.length, s.bus.length);
}

inline void prepare(DeploymentInstance& ws, const StreetConfig& s)
{
    if (ws.lanes.empty())
        for (double c : lane_centers(s))
            ws.lanes.push_back({c, {}});
    ws.clear();
}

/// Fills the UE sidewalk over `window`; the UE at ue_x is a point of the
/// outer path.
inline void populate_sidewalk(Rng& rng, const Scenario& scn, const SimulationMode& mode, double ue_x,
                              const std::optional<Window>& window, DeploymentInstance& ws)
{
    if (!window)
        return;
    const auto& s = scn.street();
    if (mode.pedestrian_placement == PedestrianPlacement::on_paths) {
        sample_path(rng, scn, inner_path_offset(s), window->first, window->second, ws.pedestrians);
        sample_path_from(rng, scn, ue_lateral_offset(s), ue_x, window->first, window->second, ws.pedestrians);
    } else {
        sample_crowd(rng, scn, 2.0 * s.w_L, 2.0 * s.w_L + s.w_S, window->first, window->second, ws.pedestrians);
    }
}

inline std::optional<Window> lane_window(const StreetConfig& s, double center, const Vec3& a, const Vec3& b)
{
    return crossing_window(a, b, center - 0.5 * s.w_L, center + 0.5 * s.w_L, max_vehicle_height(s), 0.5);
}

inline void populate_lane(Rng& rng, const Scenario& scn, const SimulationMode& mode, std::size_t lane,
                          const std::optional<Window>& window, DeploymentInstance& ws)
{
    if (window)
        sample_lane(rng, scn, ws.lanes[lane].center, window->first, window->second, mode, ws.lanes[lane].vehicles);
}

/// A COW centered at x, laterally placed per mode.
inline Vehicle place_cow(Rng& rng, const Scenario& scn, double x, const SimulationMode& mode)
{
    const auto& s = scn.street();
    Vehicle v{};
    double center = 1.5 * s.w_L;
    if (mode.vehicle_lateral == VehicleLateral::jittered) {
        const double slack = 0.5 * std::max(0.0, s.w_L - s.car.width);
        center += uniform(rng, -slack, slack);
    }
    v.body = {x - 0.5 * s.car.length, x + 0.5 * s.car.length, center - 0.5 * s.car.width,
              center + 0.5 * s.car.width, s.car.height};
    v.kind = VehicleKind::car;
    v.is_cow = true;
    return v;
}

inline constexpr BlockerScope kPedestriansOnly{true, false};
inline constexpr BlockerScope kVehiclesOnly{false, true};

/// {human, vehicle, joint} blockage indicators of one UE-AP drop.
inline std::array<double, 3> ue_ap_drop(Rng& rng, const Scenario& scn, const SimulationMode& mode, double x0,
                                        DeploymentInstance& ws)
{
    const auto& s = scn.street();
    prepare(ws, s);
    const Vec3 u = ue_position(s, x0);
    const Vec3 ap = ap_position(s);
    populate_sidewalk(rng, scn, mode, x0, pedestrian_window(s, u, ap, mode.blocking_faces), ws);
    for (std::size_t lane : {kNearCentralLane, kNearSideLane})
        populate_lane(rng, scn, mode, lane, lane_window(s, ws.lanes[lane].center, u, ap), ws);
    const bool human = is_blocked(ws, u, ap, mode, kPedestriansOnly);
    const bool vehicle = is_blocked(ws, u, ap, mode, kVehiclesOnly);
    return {double(human), double(vehicle), double(human || vehicle)};
}

inline std::array<double, 1> ue_cow_drop(Rng& rng, const Scenario& scn, const SimulationMode& mode, double x_S,
                                         DeploymentInstance& ws)
{
    const auto& s = scn.street();
    prepare(ws, s);
    const Vec3 u = ue_position(s, 0.0);
    const Vec3 cow = place_cow(rng, scn, x_S, mode).antenna(s.h_C);
    populate_sidewalk(rng, scn, mode, 0.0, pedestrian_window(s, u, cow, mode.blocking_faces), ws);
    return {double(is_blocked(ws, u, cow, mode, kPedestriansOnly))};
}

inline std::array<double, 1> cow_ap_drop(Rng& rng, const Scenario& scn, const SimulationMode& mode, double x1,
                                         DeploymentInstance& ws)
{
    const auto& s = scn.street();
    prepare(ws, s);
    x1 = std::abs(x1);
    const Vec3 ap = ap_position(s);
    const Vehicle own = place_cow(rng, scn, x1, mode);
    const Vec3 cow = own.antenna(s.h_C);
    auto& side = ws.lanes[kNearSideLane];
    side.vehicles.push_back(own);
    if (const auto w = lane_window(s, side.center, cow, ap))
        sample_lane_behind(rng, scn, side.center, own.body.x_lo, w->first, mode, side.vehicles);
    populate_lane(rng, scn, mode, kNearCentralLane, lane_window(s, ws.lanes[kNearCentralLane].center, cow, ap), ws);
    return {double(is_blocked(ws, cow, ap, mode, kVehiclesOnly))};
}

inline std::array<double, 1> cow_coverage_drop(Rng& rng, const Scenario& scn, const SimulationMode& mode,
                                               DeploymentInstance& ws)
{
    const auto& s = scn.street();
    prepare(ws, s);
    const double x_R = cow_window_half_length(s);
    if (x_R <= 0.0)
        return {0.0};
    auto& side = ws.lanes[kNearSideLane];
    sample_lane(rng, scn, side.center, -x_R - max_vehicle_length(s), x_R, mode, side.vehicles);
    for (const auto& v : side.vehicles)
        if (v.is_cow && std::abs(v.antenna(s.h_C).x) <= x_R)
            return {1.0};
    return {0.0};
}

/// {baseline, conservative, aggressive} SE of one drop; all three strategies
/// see the same street.
inline std::array<double, 3> strategy_drop(Rng& rng, const Scenario& scn, const SimulationMode& mode,
                                           DeploymentInstance& ws)
{
    const auto& s = scn.street();
    prepare(ws, s);
    const double half = 0.5 * s.d_I;
    const double x0 = uniform(rng, 0.0, half);
    const double x_R = cow_window_half_length(s);
    const Vec3 u = ue_position(s, x0);
    const Vec3 ap = ap_position(s);

    auto& side = ws.lanes[kNearSideLane];
    sample_lane(rng, scn, side.center, std::min(0.0, x0 - x_R) - 1.0, x0 + x_R + 1.0, mode, side.vehicles);

    const Vehicle* chosen = nullptr;
    if (x_R > 0.0) {
        std::size_t in_range = 0;
        for (const auto& v : side.vehicles) {
            if (!v.is_cow || std::abs(v.antenna(s.h_C).x - x0) > x_R)
                continue;
            ++in_range;
            if (s.relay_selection == RelaySelection::nearest) {
                if (!chosen || std::abs(v.antenna(s.h_C).x - x0) < std::abs(chosen->antenna(s.h_C).x - x0))
                    chosen = &v;
            } else if (uniform01(rng) * static_cast<double>(in_range) < 1.0) {
                chosen = &v;  // reservoir draw
            }
        }
    }

    auto central = lane_window(s, ws.lanes[kNearCentralLane].center, u, ap);
    auto sidewalk = pedestrian_window(s, u, ap, mode.blocking_faces);
    Vec3 cow{};
    if (chosen) {
        cow = chosen->antenna(s.h_C);
        central = hull(central, lane_window(s, ws.lanes[kNearCentralLane].center, cow, ap));
        sidewalk = hull(sidewalk, pedestrian_window(s, u, cow, mode.blocking_faces));
    }
    populate_lane(rng, scn, mode, kNearCentralLane, central, ws);
    populate_sidewalk(rng, scn, mode, x0, sidewalk, ws);

    const auto direct_budget = link_budget(s, LinkClass::ue_ap, x0);
    const double direct =
        spectral_efficiency(is_blocked(ws, u, ap, mode) ? direct_budget.S_N : direct_budget.S_L);
    if (!chosen)
        return {direct, direct, direct};

    const auto first_budget = link_budget(s, LinkClass::ue_cow, cow.x - x0);
    const auto second_budget = link_budget(s, LinkClass::cow_ap, std::abs(cow.x));
    const double first =
        spectral_efficiency(is_blocked(ws, u, cow, mode, kPedestriansOnly) ? first_budget.S_N : first_budget.S_L);
    const double second =
        spectral_efficiency(is_blocked(ws, cow, ap, mode, kVehiclesOnly) ? second_budget.S_N : second_budget.S_L);
    // The UE takes the path with the larger SNR; SE is monotone in SNR, and a
    // two-hop path is rated by the SNR that yields its combined SE.
    return {direct, std::max(direct, harmonic_combination(first, second)), std::max(direct, second)};
}

}  // namespace detail

/// Mean SE of all strategies from one set of drops.
inline std::array<SimEstimate, 3> estimate_strategies(const Scenario& scn, const SimulationMode& mode,
                                                      std::uint64_t n_drops, std::uint64_t seed, unsigned threads = 1)
{
    return detail::run_drops<3>(
        [&](Rng& rng, DeploymentInstance& ws) { return detail::strategy_drop(rng, scn, mode, ws); }, n_drops, seed,
        threads);
}

inline SimEstimate estimate(const Scenario& scn, const SimulationMode& mode, const Quantity& q,
                            std::uint64_t n_drops, std::uint64_t seed, unsigned threads = 1)
{
    switch (q.kind) {
    case QuantityKind::ue_ap_human:
    case QuantityKind::ue_ap_vehicle:
    case QuantityKind::ue_ap_joint: {
        const auto r = detail::run_drops<3>(
            [&](Rng& rng, DeploymentInstance& ws) { return detail::ue_ap_drop(rng, scn, mode, q.position, ws); },
            n_drops, seed, threads);
        return r[static_cast<std::size_t>(q.kind) - static_cast<std::size_t>(QuantityKind::ue_ap_human)];
    }
    case QuantityKind::cow_coverage:
        return detail::run_drops<1>(
            [&](Rng& rng, DeploymentInstance& ws) { return detail::cow_coverage_drop(rng, scn, mode, ws); }, n_drops,
            seed, threads)[0];
    case QuantityKind::ue_cow:
        return detail::run_drops<1>(
            [&](Rng& rng, DeploymentInstance& ws) { return detail::ue_cow_drop(rng, scn, mode, q.position, ws); },
            n_drops, seed, threads)[0];
    case QuantityKind::cow_ap:
        return detail::run_drops<1>(
            [&](Rng& rng, DeploymentInstance& ws) { return detail::cow_ap_drop(rng, scn, mode, q.position, ws); },
            n_drops, seed, threads)[0];
    case QuantityKind::mean_se:
        return estimate_strategies(scn, mode, n_drops, seed, threads)[static_cast<std::size_t>(q.strategy)];
    }
    throw std::invalid_argument("unknown quantity");
}

}  // namespace vrelay
