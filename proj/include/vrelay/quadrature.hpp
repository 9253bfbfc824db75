#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vrelay {

class QuadratureError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions
{
    double rel_tol = 1e-6;
    double abs_tol = 1e-13;
    std::size_t max_intervals = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1]: abscissae, Kronrod weights, and Gauss
// weights for the odd-indexed (Gauss) nodes.
inline constexpr std::array<double, 8> kGkNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel
{
    double a;
    double b;
    std::array<double, N> value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::size_t N, class F>
Panel<N> gauss_kronrod(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, N> kronrod{};
    std::array<double, N> gauss{};
    const std::array<double, N> mid = f(center);
    for (std::size_t c = 0; c < N; ++c) {
        kronrod[c] = kKronrodWeights[7] * mid[c];
        gauss[c] = kGaussWeights[3] * mid[c];
    }
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kGkNodes[i];
        const std::array<double, N> lo = f(center - dx);
        const std::array<double, N> hi = f(center + dx);
        for (std::size_t c = 0; c < N; ++c) {
            const double s = lo[c] + hi[c];
            kronrod[c] += kKronrodWeights[i] * s;
            if (i % 2 == 1)
                gauss[c] += kGaussWeights[i / 2] * s;
        }
    }
    Panel<N> panel{a, b, {}, 0.0};
    for (std::size_t c = 0; c < N; ++c) {
        panel.value[c] = kronrod[c] * half;
        panel.error = std::max(panel.error, std::abs((kronrod[c] - gauss[c]) * half));
        if (!std::isfinite(panel.value[c]))
            throw QuadratureError("integrand is not finite on the interval");
    }
    return panel;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of a vector-valued integrand. All
/// components share the same panels, so a pointwise ordering between two
/// components carries over to their integrals (the weights are positive).
///
/// Stops when the summed error estimate is below
/// max(rel_tol * max_c |I_c|, abs_tol); throws QuadratureError otherwise.
template <std::size_t N, class F>
std::array<double, N> integrate_n(F f, double a, double b, QuadratureOptions opt = {})
{
    if (!(a <= b))
        throw QuadratureError("integration bounds must satisfy a <= b");
    std::array<double, N> total{};
    if (a == b)
        return total;

    std::vector<detail::Panel<N>> panels{detail::gauss_kronrod<N>(f, a, b)};
    double error = panels.front().error;
    total = panels.front().value;

    auto magnitude = [&] {
        double m = 0.0;
        for (double v : total)
            m = std::max(m, std::abs(v));
        return m;
    };

    while (error > std::max(opt.rel_tol * magnitude(), opt.abs_tol)) {
        if (panels.size() >= opt.max_intervals)
            throw QuadratureError("adaptive quadrature did not converge");
        std::pop_heap(panels.begin(), panels.end());
        const detail::Panel<N> worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw QuadratureError("adaptive quadrature exhausted floating-point resolution");
        panels.push_back(detail::gauss_kronrod<N>(f, worst.a, mid));
        std::push_heap(panels.begin(), panels.end());
        panels.push_back(detail::gauss_kronrod<N>(f, mid, worst.b));
        std::push_heap(panels.begin(), panels.end());
        // Re-sum rather than update in place so rounding drift stays bounded.
        total = {};
        error = 0.0;
        for (const auto& p : panels) {
            for (std::size_t c = 0; c < N; ++c)
                total[c] += p.value[c];
            error += p.error;
        }
    }
    return total;
}

/// Scalar adaptive quadrature; `rel_tol` is the requested relative error.
template <class F>
double integrate(F f, double a, double b, double rel_tol = 1e-6)
{
    auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_n<1>(wrapped, a, b, opt)[0];
}

}  // namespace vrelay
