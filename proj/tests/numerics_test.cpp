#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <vrelay/compound.hpp>
#include <vrelay/config_io.hpp>
#include <vrelay/distribution.hpp>
#include <vrelay/link.hpp>
#include <vrelay/quadrature.hpp>
#include <vrelay/scenario.hpp>

#include "oracles.hpp"

using namespace vrelay;

namespace {

double trapezoid(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i)
        s += f(a + i * h);
    return s * h;
}

}  // namespace

TEST(Coverage, EmptyIntervalIsNeverCovered)
{
    EXPECT_EQ(renewal_coverage_probability(Distribution(DistributionSpec::exponential(1.0)), 0.0), 0.0);
}

TEST(Coverage, ExponentialClosedForm)
{
    const Distribution d(DistributionSpec::exponential(1.0));
    const double p = renewal_coverage_probability(d, 2.0);
    EXPECT_NEAR(p, 1.0 - std::exp(-2.0), 1e-14);
    EXPECT_NEAR(p, 0.8647, 1e-4);
    // (t - int_0^t F) / E[L] by numeric integration.
    const double numeric = (2.0 - trapezoid([&](double x) { return d.cdf(x); }, 0.0, 2.0, 200000)) / 1.0;
    EXPECT_NEAR(p, numeric, 1e-9);
}

TEST(Coverage, LongIntervalIsAlwaysCovered)
{
    for (const auto& spec : {DistributionSpec::exponential(3.0), DistributionSpec::uniform(1.0, 5.0),
                             DistributionSpec::deterministic(2.0)})
        EXPECT_NEAR(renewal_coverage_probability(Distribution(spec), 1e4), 1.0, 1e-12);
}

TEST(Coverage, MatchesStationaryRenewalSampling)
{
    oracle::Engine g(11);
    for (const auto& spec : {DistributionSpec::uniform(1.0, 5.0), DistributionSpec::deterministic(2.5)}) {
        const Distribution d(spec);
        const double t = 1.7;
        // Long renewal chain; count windows [u, u + t] at uniform offsets.
        std::vector<double> pts;
        double x = 0.0;
        while (x < 2e6) {
            x += spec.family == GapFamily::uniform ? oracle::unif(g, 1.0, 5.0) : 2.5;
            pts.push_back(x);
        }
        int hits = 0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = oracle::unif(g, 10.0, 1.9e6);
            const auto it = std::lower_bound(pts.begin(), pts.end(), u);
            hits += (*it <= u + t);
        }
        EXPECT_NEAR(static_cast<double>(hits) / n, renewal_coverage_probability(d, t), 0.005);
    }
}

TEST(Distribution, SurvivalIntegralMatchesQuadrature)
{
    for (const auto& spec : {DistributionSpec::exponential(2.0), DistributionSpec::uniform(0.5, 3.0),
                             DistributionSpec::deterministic(1.5)}) {
        const Distribution d(spec);
        for (double t : {0.3, 1.0, 2.0, 4.0}) {
            const double ref = trapezoid([&](double x) { return 1.0 - d.cdf(x); }, 0.0, t, 400000);
            EXPECT_NEAR(d.survival_integral(t), ref, 2e-5) << format_distribution(spec) << " t=" << t;
        }
    }
}

TEST(Distribution, EquilibriumResidualHasTheRightMean)
{
    // E[residual] = E[X^2] / (2 E[X]).
    Rng rng = make_stream(3, 0);
    const Distribution u(DistributionSpec::uniform(1.0, 3.0));
    const Distribution det(DistributionSpec::deterministic(2.0));
    double su = 0.0;
    double sd = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        su += u.sample_equilibrium(rng);
        sd += det.sample_equilibrium(rng);
    }
    EXPECT_NEAR(su / n, (13.0 / 3.0) / 4.0, 0.01);
    EXPECT_NEAR(sd / n, 1.0, 0.01);
}

TEST(BusGap, NoMassAtZero)
{
    const BusGapDistribution bg(0.05, 4.5, Distribution(DistributionSpec::exponential(20.0)));
    EXPECT_EQ(bg.cdf(0.0), 0.0);
    EXPECT_EQ(bg.cdf(-1.0), 0.0);
}

TEST(BusGap, AllBusesLeavesOneGap)
{
    const Distribution gap(DistributionSpec::exponential(20.0));
    const BusGapDistribution bg(1.0, 4.5, gap);
    for (double x : {1.0, 10.0, 50.0})
        EXPECT_NEAR(bg.cdf(x), gap.cdf(x), 1e-14);
}

TEST(BusGap, MeanOfTheCompound)
{
    const BusGapDistribution bg(0.05, 4.5, Distribution(DistributionSpec::exponential(20.0)));
    EXPECT_NEAR(bg.mean(), 485.5, 1e-9);
    // The survival integral to infinity is the mean.
    EXPECT_NEAR(bg.survival_integral(2e4), 485.5, 485.5 * 1e-7);
}

TEST(BusGap, ErlangMixtureMatchesSamplingOracle)
{
    oracle::Engine g(2024);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (auto& d : draws) {
        d = oracle::exp_draw(g, 20.0);
        while (!oracle::coin(g, 0.05))
            d += 4.5 + oracle::exp_draw(g, 20.0);
    }
    std::sort(draws.begin(), draws.end());
    const BusGapDistribution bg(0.05, 4.5, Distribution(DistributionSpec::exponential(20.0)));
    EXPECT_LT(oracle::ks_upper_bound(draws, [&](double x) { return bg.cdf(x); }, 50), 0.005);
    const double below50 = static_cast<double>(std::lower_bound(draws.begin(), draws.end(), 50.0) - draws.begin()) / n;
    EXPECT_NEAR(bg.cdf(50.0), below50, 0.003);
}

TEST(BusGap, NonExponentialGapsFallBackToSampling)
{
    oracle::Engine g(5);
    const int n = 300000;
    std::vector<double> draws(n);
    for (auto& d : draws) {
        d = oracle::unif(g, 5.0, 15.0);
        while (!oracle::coin(g, 0.2))
            d += 4.5 + oracle::unif(g, 5.0, 15.0);
    }
    std::sort(draws.begin(), draws.end());
    const BusGapDistribution bg(0.2, 4.5, Distribution(DistributionSpec::uniform(5.0, 15.0)));
    EXPECT_LT(oracle::ks_distance(draws, [&](double x) { return bg.cdf(x); }), 0.006);
}

TEST(RelaySpacing, MixtureMatchesSamplingOracle)
{
    StreetConfig s;
    StochasticConfig sto;
    sto.p_R = 0.3;
    const RelaySpacingDistribution lr(s, sto, Distribution(sto.vehicle_gap));
    oracle::Engine g(77);
    const int n = 400000;
    std::vector<double> draws(n);
    for (auto& d : draws) {
        // Walk the lane from one COW until the next car flagged as a COW.
        d = 0.5 * s.car.length + oracle::exp_draw(g, 20.0);
        for (;;) {
            const bool bus = oracle::coin(g, sto.p_T);
            const double len = bus ? s.bus.length : s.car.length;
            if (!bus && oracle::coin(g, sto.p_R)) {
                d += 0.5 * len;
                break;
            }
            d += len + oracle::exp_draw(g, 20.0);
        }
    }
    std::sort(draws.begin(), draws.end());
    EXPECT_LT(oracle::ks_upper_bound(draws, [&](double x) { return lr.cdf(x); }, 20), 0.005);
    double mean = 0.0;
    for (double d : draws)
        mean += d / n;
    EXPECT_NEAR(lr.mean(), mean, 0.01 * mean);
}

TEST(RelaySpacing, NoCowsMeansInfiniteSpacing)
{
    StochasticConfig sto;
    sto.p_R = 0.0;
    const RelaySpacingDistribution lr(StreetConfig{}, sto, Distribution(sto.vehicle_gap));
    EXPECT_TRUE(std::isinf(lr.mean()));
    EXPECT_EQ(lr.cdf(100.0), 0.0);
}

TEST(Quadrature, Constant)
{
    EXPECT_NEAR(integrate([](double) { return 1.0; }, 0.0, 1.0), 1.0, 1e-14);
}

TEST(Quadrature, PolynomialIsExact)
{
    EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0), 9.0, 1e-12);
}

TEST(Quadrature, EmptyAndReversedIntervals)
{
    EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
    EXPECT_THROW(integrate([](double) { return 1.0; }, 2.0, 1.0), QuadratureError);
}

TEST(Quadrature, NonIntegrableSingularityThrows)
{
    EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10), QuadratureError);
}

TEST(Quadrature, VectorIntegrandMatchesComponentwise)
{
    const auto v = integrate_n<2>([](double x) { return std::array<double, 2>{std::sin(x), std::exp(-x)}; }, 0.0,
                                  3.0, {});
    EXPECT_NEAR(v[0], 1.0 - std::cos(3.0), 1e-8);
    EXPECT_NEAR(v[1], 1.0 - std::exp(-3.0), 1e-8);
}

TEST(Quadrature, SpectralEfficiencyCurveMatchesTrapezoid)
{
    // C(x0) over half an inter-site distance, kinked where the blockage
    // terms switch.
    StochasticConfig sto;
    sto.pedestrian_gap = density_to_pedestrian_gap(0.5, 0.3);
    StreetConfig s;
    s.bus.height = 4.5;
    const Scenario scn(s, sto);
    auto f = [&](double x0) { return mean_se_ue_ap(scn, x0); };
    const double adaptive = integrate(f, 0.0, 150.0, 1e-9);
    const double reference = trapezoid(f, 0.0, 150.0, 400000);
    EXPECT_NEAR(adaptive / 150.0, reference / 150.0, 1e-5);
}

TEST(Oracle, StridedKsBoundDominatesTheExactDistance)
{
    oracle::Engine g(3);
    std::vector<double> draws(20000);
    for (auto& d : draws)
        d = oracle::exp_draw(g, 2.0);
    std::sort(draws.begin(), draws.end());
    auto cdf = [](double x) { return 1.0 - std::exp(-x / 2.1); };
    const double exact = oracle::ks_distance(draws, cdf);
    for (std::size_t stride : {1, 7, 50}) {
        const double bound = oracle::ks_upper_bound(draws, cdf, stride);
        EXPECT_GE(bound, exact);
        EXPECT_LT(bound, exact + 0.005);
    }
}
