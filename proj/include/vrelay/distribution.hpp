#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "config.hpp"
#include "random.hpp"

namespace vrelay {

/// Gap distribution of a renewal process on [0, inf).
class Distribution
{
public:
    explicit Distribution(DistributionSpec spec = DistributionSpec::empty())
        : spec_(spec)
    {
    }

    const DistributionSpec& spec() const { return spec_; }
    double mean() const { return spec_.mean(); }
    bool is_exponential() const { return spec_.family == GapFamily::exponential; }
    bool is_empty() const { return !std::isfinite(mean()); }

    double cdf(double x) const
    {
        if (x < 0.0)
            return 0.0;
        switch (spec_.family) {
        case GapFamily::exponential:
            return is_empty() ? 0.0 : -std::expm1(-x / spec_.value);
        case GapFamily::deterministic:
            return x >= spec_.value ? 1.0 : 0.0;
        case GapFamily::uniform:
            if (x <= spec_.lower)
                return 0.0;
            if (x >= spec_.upper)
                return 1.0;
            return (x - spec_.lower) / (spec_.upper - spec_.lower);
        }
        return 0.0;
    }

    /// int_0^t (1 - F(x)) dx, i.e. E[min(X, t)].
    double survival_integral(double t) const
    {
        if (t <= 0.0)
            return 0.0;
        switch (spec_.family) {
        case GapFamily::exponential:
            return is_empty() ? t : -spec_.value * std::expm1(-t / spec_.value);
        case GapFamily::deterministic:
            return std::min(t, spec_.value);
        case GapFamily::uniform: {
            const double a = spec_.lower;
            const double b = spec_.upper;
            if (t <= a)
                return t;
            if (t >= b)
                return 0.5 * (a + b);
            return a + ((b - a) * (b - a) - (b - t) * (b - t)) / (2.0 * (b - a));
        }
        }
        return t;
    }

    /// int_0^t F(x) dx.
    double partial_integral(double t) const { return t <= 0.0 ? 0.0 : t - survival_integral(t); }

    double sample(Rng& rng) const
    {
        switch (spec_.family) {
        case GapFamily::exponential:
            return exponential(rng, spec_.value);
        case GapFamily::deterministic:
            return spec_.value;
        case GapFamily::uniform:
            return uniform(rng, spec_.lower, spec_.upper);
        }
        return spec_.value;
    }

    /// Residual gap seen from an arbitrary point of a stationary process,
    /// density (1 - F(x)) / E[X].
    double sample_equilibrium(Rng& rng) const
    {
        switch (spec_.family) {
        case GapFamily::exponential:
            return exponential(rng, spec_.value);
        case GapFamily::deterministic:
            return spec_.value * uniform01(rng);
        case GapFamily::uniform: {
            const double a = spec_.lower;
            const double b = spec_.upper;
            if (uniform01(rng) * mean() < a)
                return a * uniform01(rng);
            return b - (b - a) * std::sqrt(uniform01(rng));
        }
        }
        return 0.0;
    }

private:
    DistributionSpec spec_;
};

/// Probability that a stationary renewal process with gap distribution `dist`
/// has at least one point in a fixed interval of length t:
/// (t - int_0^t F(x) dx) / E[X].
template <class Dist>
double renewal_coverage_probability(const Dist& dist, double t)
{
    if (!(t > 0.0))
        return 0.0;
    const double mean = dist.mean();
    if (!std::isfinite(mean))
        return 0.0;
    return std::clamp(dist.survival_integral(t) / mean, 0.0, 1.0);
}

}  // namespace vrelay
