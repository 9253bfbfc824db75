#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "config.hpp"
#include "distribution.hpp"
#include "random.hpp"

namespace vrelay {

namespace detail {

inline constexpr double kMixtureTail = 1e-9;

/// P{Erlang(n, mean) <= y}.
inline double erlang_cdf(int n, double mean, double y)
{
    if (y <= 0.0)
        return 0.0;
    return boost::math::gamma_p(static_cast<double>(n), y / mean);
}

/// int_0^y P{Erlang(n, mean) <= u} du = E[(y - X)^+].
inline double erlang_cdf_integral(int n, double mean, double y)
{
    if (y <= 0.0)
        return 0.0;
    const double a = y * erlang_cdf(n, mean, y) - n * mean * erlang_cdf(n + 1, mean, y);
    return std::max(a, 0.0);
}

}  // namespace detail

/// Empirical CDF over a fixed sample; immutable once built.
class EmpiricalCdf
{
public:
    explicit EmpiricalCdf(std::vector<double> samples)
        : sorted_(std::move(samples))
    {
        std::sort(sorted_.begin(), sorted_.end());
        prefix_.resize(sorted_.size() + 1, 0.0);
        for (std::size_t i = 0; i < sorted_.size(); ++i)
            prefix_[i + 1] = prefix_[i] + sorted_[i];
        mean_ = sorted_.empty() ? 0.0 : prefix_.back() / static_cast<double>(sorted_.size());
    }

    double cdf(double x) const
    {
        if (sorted_.empty())
            return 0.0;
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    /// Sample mean of (x - X)^+.
    double cdf_integral(double x) const
    {
        if (sorted_.empty() || x <= 0.0)
            return 0.0;
        const auto k = static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
        return (static_cast<double>(k) * x - prefix_[k]) / static_cast<double>(sorted_.size());
    }

    double mean() const { return mean_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;
    double mean_ = 0.0;
};

inline constexpr std::size_t kFallbackSamples = 1'000'000;
inline constexpr std::uint64_t kFallbackSeed = 0x0b5e55edULL;

/// Bumper-to-bumper distance D_B = N_C * l_C + sum_{i=1}^{N_C + 1} d_i from a
/// vehicle to the next bus in the same lane, with N_C geometric on {0, 1, ...},
/// P{N_C = k} = p_T (1 - p_T)^k.
///
/// Exponential gaps give a mixture of shifted Erlang laws truncated at tail
/// mass 1e-9; other gap families use an empirical CDF over 10^6 draws.
class BusGapDistribution
{
public:
    BusGapDistribution(double p_T, double car_length, Distribution gap)
        : p_T_(p_T), car_length_(car_length), gap_(gap)
    {
        if (p_T_ > 0.0 && !gap_.is_exponential() && !gap_.is_empty()) {
            Rng rng = make_stream(kFallbackSeed, 1);
            std::vector<double> draws(kFallbackSamples);
            for (auto& d : draws)
                d = sample(rng);
            empirical_ = std::make_shared<const EmpiricalCdf>(std::move(draws));
        }
    }

    double p_T() const { return p_T_; }

    /// (E[D] + l_C (1 - p_T)) / p_T.
    double mean() const
    {
        if (p_T_ <= 0.0)
            return std::numeric_limits<double>::infinity();
        return (gap_.mean() + car_length_ * (1.0 - p_T_)) / p_T_;
    }

    double cdf(double x) const
    {
        if (x <= 0.0 || p_T_ <= 0.0 || gap_.is_empty())
            return 0.0;
        if (empirical_)
            return empirical_->cdf(x);
        if (!gap_.is_exponential())
            return gap_.cdf(x);  // p_T == 1: a single gap
        double total = 0.0;
        double weight = p_T_;
        double tail = 1.0;
        for (int k = 0; tail > detail::kMixtureTail; ++k) {
            const double shifted = x - k * car_length_;
            if (shifted <= 0.0)
                break;
            total += weight * detail::erlang_cdf(k + 1, gap_.mean(), shifted);
            tail -= weight;
            weight *= 1.0 - p_T_;
        }
        return std::clamp(total, 0.0, 1.0);
    }

    double survival_integral(double t) const
    {
        if (t <= 0.0)
            return 0.0;
        if (p_T_ <= 0.0 || gap_.is_empty())
            return t;
        if (empirical_)
            return t - empirical_->cdf_integral(t);
        if (!gap_.is_exponential())
            return gap_.survival_integral(t);
        double integral = 0.0;
        double weight = p_T_;
        double tail = 1.0;
        for (int k = 0; tail > detail::kMixtureTail; ++k) {
            const double shifted = t - k * car_length_;
            if (shifted <= 0.0)
                break;
            integral += weight * detail::erlang_cdf_integral(k + 1, gap_.mean(), shifted);
            tail -= weight;
            weight *= 1.0 - p_T_;
        }
        return t - integral;
    }

    double sample(Rng& rng) const
    {
        if (p_T_ <= 0.0)
            return std::numeric_limits<double>::infinity();
        double d = gap_.sample(rng);
        while (!bernoulli(rng, p_T_))
            d += car_length_ + gap_.sample(rng);
        return d;
    }

private:
    double p_T_;
    double car_length_;
    Distribution gap_;
    std::shared_ptr<const EmpiricalCdf> empirical_;
};

/// Center-to-center distance L_R between consecutive COWs of one lane.
///
/// A vehicle is a COW with probability q = p_R (1 - p_T). Between two COWs
/// there are K - 1 non-COW vehicles (K geometric on {1, 2, ...}, parameter q),
/// each a bus with probability p_T / (1 - q), and K bumper gaps:
/// L_R = l_C + sum of K - 1 vehicle lengths + sum of K gaps.
class RelaySpacingDistribution
{
public:
    RelaySpacingDistribution(const StreetConfig& street, const StochasticConfig& sto, Distribution gap)
        : car_length_(street.car.length),
          bus_length_(street.bus.length),
          q_(sto.p_R * (1.0 - sto.p_T)),
          bus_share_(q_ < 1.0 ? sto.p_T / (1.0 - q_) : 0.0),
          p_T_(sto.p_T),
          gap_(gap)
    {
        if (q_ > 0.0 && !gap_.is_exponential() && !gap_.is_empty()) {
            Rng rng = make_stream(kFallbackSeed, 2);
            std::vector<double> draws(kFallbackSamples);
            for (auto& d : draws)
                d = sample(rng);
            empirical_ = std::make_shared<const EmpiricalCdf>(std::move(draws));
        }
    }

    double cow_probability() const { return q_; }

    /// [l_C (1 - p_T) + E[D] + p_T l_T] / [p_R (1 - p_T)].
    double mean() const
    {
        if (q_ <= 0.0 || gap_.is_empty())
            return std::numeric_limits<double>::infinity();
        return (car_length_ * (1.0 - p_T_) + gap_.mean() + p_T_ * bus_length_) / q_;
    }

    double cdf(double x) const
    {
        if (x <= 0.0 || q_ <= 0.0 || gap_.is_empty())
            return 0.0;
        if (empirical_)
            return empirical_->cdf(x);
        return std::clamp(mixture_sum(x, [this](int k, double y) { return detail::erlang_cdf(k, gap_.mean(), y); }),
                          0.0, 1.0);
    }

    double survival_integral(double t) const
    {
        if (t <= 0.0)
            return 0.0;
        if (q_ <= 0.0 || gap_.is_empty())
            return t;
        if (empirical_)
            return t - empirical_->cdf_integral(t);
        return t - mixture_sum(t, [this](int k, double y) { return detail::erlang_cdf_integral(k, gap_.mean(), y); });
    }

    double sample(Rng& rng) const
    {
        if (q_ <= 0.0)
            return std::numeric_limits<double>::infinity();
        double d = car_length_ + gap_.sample(rng);
        while (!bernoulli(rng, q_)) {
            d += (bernoulli(rng, bus_share_) ? bus_length_ : car_length_) + gap_.sample(rng);
        }
        return d;
    }

private:
    // Sums weight(k, m) * term(k, x - shift(k, m)) over K = k and m buses among
    // the k - 1 intermediate vehicles. Only valid for exponential gaps.
    template <class Term>
    double mixture_sum(double x, Term term) const
    {
        double total = 0.0;
        double k_weight = q_;
        double tail = 1.0;
        const double shortest = std::min(car_length_, bus_length_);
        const double extra = bus_length_ - car_length_;
        for (int k = 1; tail > detail::kMixtureTail; ++k) {
            const int n = k - 1;
            if (x - car_length_ - n * shortest <= 0.0)
                break;
            const double base = x - car_length_ - n * car_length_;
            for (int m = 0; m <= n; ++m) {
                const double m_weight = binomial_pmf(n, m);
                if (m_weight < 1e-17)
                    continue;
                const double shifted = base - m * extra;
                if (shifted <= 0.0)
                    continue;
                total += k_weight * m_weight * term(k, shifted);
            }
            tail -= k_weight;
            k_weight *= 1.0 - q_;
        }
        return total;
    }

    double binomial_pmf(int n, int m) const
    {
        if (bus_share_ <= 0.0)
            return m == 0 ? 1.0 : 0.0;
        if (bus_share_ >= 1.0)
            return m == n ? 1.0 : 0.0;
        const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0) +
                               m * std::log(bus_share_) + (n - m) * std::log1p(-bus_share_);
        return std::exp(log_pmf);
    }

    double car_length_;
    double bus_length_;
    double q_;
    double bus_share_;
    double p_T_;
    Distribution gap_;
    std::shared_ptr<const EmpiricalCdf> empirical_;
};

}  // namespace vrelay
