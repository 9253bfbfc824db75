#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockage.hpp"
#include "link.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"

namespace vrelay {

enum class Strategy
{
    baseline,
    conservative,
    aggressive
};

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::baseline, Strategy::conservative,
                                                           Strategy::aggressive};

inline std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::baseline:
        return "baseline";
    case Strategy::conservative:
        return "conservative";
    case Strategy::aggressive:
        return "aggressive";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view name)
{
    for (Strategy s : kAllStrategies)
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown strategy: " + std::string(name));
}

/// Finite distribution of spectral-efficiency values (bits/s/Hz).
struct SeDistribution
{
    std::vector<double> support;
    std::vector<double> mass;

    double mean() const { return std::inner_product(support.begin(), support.end(), mass.begin(), 0.0); }
    double total_mass() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }
};

/// SE of the UE-COW-AP path when the two hops use orthogonal resources.
inline double harmonic_combination(double first_hop, double second_hop)
{
    if (first_hop <= 0.0 || second_hop <= 0.0)
        return 0.0;
    return 1.0 / (1.0 / first_hop + 1.0 / second_hop);
}

/// Direct-link SE: LoS value with the unblocked mass, nLoS value with the rest.
inline SeDistribution baseline_pmf(const Scenario& scn, double x0)
{
    const auto b = link_budget(scn.street(), LinkClass::ue_ap, x0);
    const double p = joint_blockage_ue_ap(scn, x0).p_joint;
    return {{spectral_efficiency(b.S_L), spectral_efficiency(b.S_N)}, {1.0 - p, p}};
}

/// Per-hop blockage states of a relay path through a COW at offset x_S from a
/// UE that is x0 from the AP; index 0 is LoS, 1 is nLoS.
struct RelayHops
{
    std::array<double, 2> first_se;   // UE-COW
    std::array<double, 2> first_p;
    std::array<double, 2> second_se;  // COW-AP
    std::array<double, 2> second_p;
};

inline RelayHops relay_hops(const Scenario& scn, double x0, double x_S)
{
    const auto& s = scn.street();
    const double x1 = std::abs(x0 + x_S);
    const auto first = link_budget(s, LinkClass::ue_cow, x_S);
    const auto second = link_budget(s, LinkClass::cow_ap, x1);
    const double p_first = human_blockage_ue_cow(scn, x_S);
    const double p_second = joint_blockage_cow_ap(scn, x1);
    return {{spectral_efficiency(first.S_L), spectral_efficiency(first.S_N)},
            {1.0 - p_first, p_first},
            {spectral_efficiency(second.S_L), spectral_efficiency(second.S_N)},
            {1.0 - p_second, p_second}};
}

/// f_{C+1}: the relay path is limited by the COW-AP hop; SE 0 without a COW.
inline SeDistribution aggressive_relay_pmf(const Scenario& scn, double x0, double x_S)
{
    const double p_C = cow_coverage_probability(scn);
    const auto h = relay_hops(scn, x0, x_S);
    return {{h.second_se[1], h.second_se[0], 0.0},
            {p_C * h.second_p[1], p_C * h.second_p[0], 1.0 - p_C}};
}

/// Five-point pmf of the relay path with orthogonal hop resources.
inline SeDistribution conservative_relay_pmf(const Scenario& scn, double x0, double x_S)
{
    const double p_C = cow_coverage_probability(scn);
    const auto h = relay_hops(scn, x0, x_S);
    SeDistribution out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            out.support.push_back(harmonic_combination(h.first_se[a], h.second_se[b]));
            out.mass.push_back(p_C * h.first_p[a] * h.second_p[b]);
        }
    }
    out.support.push_back(0.0);
    out.mass.push_back(1.0 - p_C);
    return out;
}

/// Conservative relay mean as the four-term closed form.
inline double conservative_relay_mean_expanded(const Scenario& scn, double x0, double x_S)
{
    const auto& s = scn.street();
    const double p_C = cow_coverage_probability(scn);
    const double x1 = std::abs(x0 + x_S);
    const double ps = human_blockage_ue_cow(scn, x_S);
    const double pa = joint_blockage_cow_ap(scn, x1);
    const auto first = link_budget(s, LinkClass::ue_cow, x_S);
    const auto second = link_budget(s, LinkClass::cow_ap, x1);
    const double sN = std::log2(1.0 + first.S_N);
    const double sL = std::log2(1.0 + first.S_L);
    const double aN = std::log2(1.0 + second.S_N);
    const double aL = std::log2(1.0 + second.S_L);
    return p_C * (ps * pa / (1.0 / sN + 1.0 / aN) + (1.0 - ps) * pa / (1.0 / sL + 1.0 / aN) +
                  ps * (1.0 - pa) / (1.0 / sN + 1.0 / aL) + (1.0 - ps) * (1.0 - pa) / (1.0 / sL + 1.0 / aL));
}

/// E[max(X, Y)] for independent X ~ baseline and Y ~ relay.
inline double best_connection_mean(const SeDistribution& baseline, const SeDistribution& relay)
{
    double total = 0.0;
    for (std::size_t i = 0; i < baseline.support.size(); ++i)
        for (std::size_t j = 0; j < relay.support.size(); ++j)
            total += baseline.mass[i] * relay.mass[j] * std::max(baseline.support[i], relay.support[j]);
    return total;
}

/// E[(Y - X)^+], the gain of the best connection over the direct link.
inline double best_connection_gain(const SeDistribution& baseline, const SeDistribution& relay)
{
    double total = 0.0;
    for (std::size_t i = 0; i < baseline.support.size(); ++i)
        for (std::size_t j = 0; j < relay.support.size(); ++j)
            total += baseline.mass[i] * relay.mass[j] * std::max(relay.support[j] - baseline.support[i], 0.0);
    return total;
}

/// Density of the offset x_S of the COW the UE attaches to, including the
/// probability that one is in range (it integrates to the coverage over
/// [-x_R, x_R]).
inline double selected_cow_density(const Scenario& scn, double x_S)
{
    const auto& s = scn.street();
    const double x_R = cow_window_half_length(s);
    if (x_R <= 0.0 || std::abs(x_S) > x_R)
        return 0.0;
    switch (s.relay_selection) {
    case RelaySelection::uniform_random:
        return cow_coverage_probability(scn) / (2.0 * x_R);
    case RelaySelection::nearest: {
        // P{nearest COW within s} = coverage of the window [-s, s].
        const double mean = scn.relay_spacing().mean();
        if (!std::isfinite(mean))
            return 0.0;
        return (1.0 - scn.relay_spacing().cdf(2.0 * std::abs(x_S))) / mean;
    }
    }
    return 0.0;
}

struct StrategyMeans
{
    double baseline = 0.0;
    double conservative = 0.0;
    double aggressive = 0.0;

    double operator[](Strategy s) const
    {
        switch (s) {
        case Strategy::baseline:
            return baseline;
        case Strategy::conservative:
            return conservative;
        case Strategy::aggressive:
            return aggressive;
        }
        return baseline;
    }
};

struct StrategyTolerances
{
    double outer = 1e-5;
    double inner = 1e-6;
    double baseline = 1e-6;
};

namespace detail {

/// Per-COW-state gains {aggressive, conservative} at (x0, x_S), given that a
/// COW sits at x_S. Both sums run over the same states so the aggressive
/// value dominates term by term.
inline std::array<double, 2> relay_gains(const SeDistribution& direct, const RelayHops& h)
{
    std::array<double, 2> g{0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double w = h.first_p[a] * h.second_p[b];
            const double aggressive = h.second_se[b];
            const double conservative = harmonic_combination(h.first_se[a], h.second_se[b]);
            for (std::size_t i = 0; i < direct.support.size(); ++i) {
                g[0] += w * direct.mass[i] * std::max(aggressive - direct.support[i], 0.0);
                g[1] += w * direct.mass[i] * std::max(conservative - direct.support[i], 0.0);
            }
        }
    }
    return g;
}

}  // namespace detail

/// Mean SE of every strategy for a UE uniform on [0, d_I/2]:
/// E[C_k] = E[C] + int w(x_S) (2 / d_I) int_0^{d_I/2} E[(Y_k - X)^+ | COW at x_S] dx0 dx_S,
/// with w the density of the selected COW's offset (mass = coverage).
inline StrategyMeans mean_se_strategies(const Scenario& scn, StrategyTolerances tol = {})
{
    StrategyMeans out;
    out.baseline = mean_se_baseline(scn, tol.baseline);
    out.conservative = out.baseline;
    out.aggressive = out.baseline;

    const auto& s = scn.street();
    const double x_R = cow_window_half_length(s);
    if (x_R <= 0.0 || cow_coverage_probability(scn) <= 0.0)
        return out;

    const double half = 0.5 * s.d_I;
    QuadratureOptions inner_opt;
    inner_opt.rel_tol = tol.inner;
    QuadratureOptions outer_opt;
    outer_opt.rel_tol = tol.outer;

    auto averaged_gain = [&](double x_S) -> std::array<double, 2> {
        const double weight = selected_cow_density(scn, x_S);
        if (weight <= 0.0)
            return {0.0, 0.0};
        const auto& st = s;
        const auto first = link_budget(st, LinkClass::ue_cow, x_S);
        const double p_first = human_blockage_ue_cow(scn, x_S);
        auto integrand = [&](double x0) {
            const double x1 = std::abs(x0 + x_S);
            const auto second = link_budget(st, LinkClass::cow_ap, x1);
            const double p_second = joint_blockage_cow_ap(scn, x1);
            const RelayHops h{{spectral_efficiency(first.S_L), spectral_efficiency(first.S_N)},
                              {1.0 - p_first, p_first},
                              {spectral_efficiency(second.S_L), spectral_efficiency(second.S_N)},
                              {1.0 - p_second, p_second}};
            return detail::relay_gains(baseline_pmf(scn, x0), h);
        };
        std::array<double, 2> sum{0.0, 0.0};
        // The COW passes the AP at x0 = -x_S.
        const double kink = -x_S;
        if (kink > 0.0 && kink < half) {
            const auto l = integrate_n<2>(integrand, 0.0, kink, inner_opt);
            const auto r = integrate_n<2>(integrand, kink, half, inner_opt);
            sum = {l[0] + r[0], l[1] + r[1]};
        } else {
            sum = integrate_n<2>(integrand, 0.0, half, inner_opt);
        }
        return {weight * sum[0] / half, weight * sum[1] / half};
    };

    const auto left = integrate_n<2>(averaged_gain, -x_R, 0.0, outer_opt);
    const auto right = integrate_n<2>(averaged_gain, 0.0, x_R, outer_opt);
    out.aggressive = out.baseline + (left[0] + right[0]);
    out.conservative = out.baseline + (left[1] + right[1]);
    return out;
}

inline double mean_se_strategy(const Scenario& scn, Strategy strategy, StrategyTolerances tol = {})
{
    if (strategy == Strategy::baseline)
        return mean_se_baseline(scn, tol.baseline);
    return mean_se_strategies(scn, tol)[strategy];
}

}  // namespace vrelay
