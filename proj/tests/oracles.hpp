#pragma once

// Reference samplers and brute-force predicates for the tests. They share no
// code with the library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <vrelay/geometry.hpp>

namespace oracle {

using Engine = std::mt19937_64;

inline double exp_draw(Engine& g, double mean)
{
    return std::exponential_distribution<double>(1.0 / mean)(g);
}

inline double unif(Engine& g, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline bool coin(Engine& g, double p)
{
    return std::bernoulli_distribution(p)(g);
}

/// Points of a Poisson process of the given mean spacing on [lo, hi].
inline std::vector<double> poisson_line(Engine& g, double mean, double lo, double hi)
{
    std::vector<double> out;
    for (double x = lo + exp_draw(g, mean); x <= hi; x += exp_draw(g, mean))
        out.push_back(x);
    return out;
}

inline bool inside(const vrelay::Cylinder& c, double x, double y, double z)
{
    return z >= 0.0 && z <= c.height && (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= c.radius * c.radius;
}

inline bool inside(const vrelay::Box& b, double x, double y, double z)
{
    return x >= b.x_lo && x <= b.x_hi && y >= b.y_lo && y <= b.y_hi && z >= 0.0 && z <= b.height;
}

/// Walks the segment in steps of at most `step` meters and reports whether any
/// interior sample point lies inside the solid.
template <class Solid>
bool discretized_hit(const vrelay::Vec3& a, const vrelay::Vec3& b, const Solid& s, double step = 0.01)
{
    const double len = std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.z - a.z) * (b.z - a.z));
    const int n = std::max(2, static_cast<int>(std::ceil(len / step)));
    for (int i = 1; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        if (inside(s, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z)))
            return true;
    }
    return false;
}

/// Height of the segment above the ground at the first point where its ground
/// projection enters the band y in [y_lo, y_hi], or NaN if it never does.
inline double height_entering_band(const vrelay::Vec3& a, const vrelay::Vec3& b, double y_lo, double y_hi)
{
    if (a.y >= y_lo && a.y <= y_hi)
        return a.z;
    const double edge = a.y > y_hi ? y_hi : y_lo;
    if (b.y == a.y)
        return std::nan("");
    const double t = (edge - a.y) / (b.y - a.y);
    if (t < 0.0 || t > 1.0)
        return std::nan("");
    return a.z + t * (b.z - a.z);
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
template <class Cdf>
double ks_distance(const std::vector<double>& sorted, Cdf cdf)
{
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

/// Upper bound on the Kolmogorov-Smirnov distance that evaluates the CDF only
/// at every `stride`-th sorted sample. Between two evaluated points both the
/// CDF and the empirical CDF are monotone, which bounds their gap.
template <class Cdf>
double ks_upper_bound(const std::vector<double>& sorted, Cdf cdf, std::size_t stride)
{
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    double f_prev = 0.0;
    std::size_t i_prev = 0;  // samples strictly left of the previous grid point
    for (std::size_t i = 0;; i = std::min(i + stride, sorted.size() - 1)) {
        const double f = cdf(sorted[i]);
        // Empirical CDF on [x_prev, x_i] lies in [i_prev / n, (i + 1) / n].
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f), f - i_prev / n, (i + 1) / n - f_prev});
        f_prev = f;
        i_prev = i;
        if (i + 1 == sorted.size())
            break;
    }
    return std::max(d, 1.0 - f_prev);
}

}  // namespace oracle

namespace oracle {

/// discretized_hit restricted to the part of the segment whose ground
/// projection meets the solid's bounding rectangle (plus a margin), so long
/// links stay cheap at centimeter resolution.
template <class Solid>
bool local_hit(const vrelay::Vec3& a, const vrelay::Vec3& b, const Solid& s, double x_lo, double x_hi, double y_lo,
               double y_hi, double step = 0.01)
{
    double t0 = 0.0;
    double t1 = 1.0;
    auto clip = [&](double p, double d, double lo, double hi) {
        if (d == 0.0)
            return p >= lo && p <= hi;
        double u = (lo - p) / d;
        double v = (hi - p) / d;
        if (u > v)
            std::swap(u, v);
        t0 = std::max(t0, u);
        t1 = std::min(t1, v);
        return t0 <= t1;
    };
    if (!clip(a.x, b.x - a.x, x_lo - 0.05, x_hi + 0.05) || !clip(a.y, b.y - a.y, y_lo - 0.05, y_hi + 0.05))
        return false;
    const vrelay::Vec3 p{a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y), a.z + t0 * (b.z - a.z)};
    const vrelay::Vec3 q{a.x + t1 * (b.x - a.x), a.y + t1 * (b.y - a.y), a.z + t1 * (b.z - a.z)};
    if (inside(s, p.x, p.y, p.z) || inside(s, q.x, q.y, q.z))
        return true;
    return discretized_hit(p, q, s, step);
}

inline bool local_hit(const vrelay::Vec3& a, const vrelay::Vec3& b, const vrelay::Cylinder& c)
{
    return local_hit(a, b, c, c.x - c.radius, c.x + c.radius, c.y - c.radius, c.y + c.radius);
}

inline bool local_hit(const vrelay::Vec3& a, const vrelay::Vec3& b, const vrelay::Box& box)
{
    return local_hit(a, b, box, box.x_lo, box.x_hi, box.y_lo, box.y_hi);
}

/// Ground-plane blockage zone of a link: centers within `half_width` of the
/// projection of a -> b, at an along-distance in (0, length] from a.
struct Zone
{
    double ax, ay, ux, uy, length, half_width;

    Zone(const vrelay::Vec3& a, const vrelay::Vec3& b, double len, double hw)
        : ax(a.x), ay(a.y), length(len), half_width(hw)
    {
        const double d = std::hypot(b.x - a.x, b.y - a.y);
        ux = (b.x - a.x) / d;
        uy = (b.y - a.y) / d;
    }

    bool contains(double x, double y) const
    {
        const double along = (x - ax) * ux + (y - ay) * uy;
        const double across = -(x - ax) * uy + (y - ay) * ux;
        return along > 0.0 && along <= length && std::abs(across) <= half_width;
    }
};

/// A vehicle lane sampled as one long renewal chain; windows at well
/// separated offsets give nearly independent stationary snapshots.
struct LaneChain
{
    struct Item
    {
        double x_lo, x_hi;
        bool bus, cow;
    };
    std::vector<Item> items;

    LaneChain(Engine& g, double length, double mean_gap, double p_T, double car_len, double bus_len, double p_R)
    {
        for (double x = exp_draw(g, mean_gap); x < length; x += exp_draw(g, mean_gap)) {
            const bool bus = coin(g, p_T);
            const double len = bus ? bus_len : car_len;
            items.push_back({x, x + len, bus, !bus && coin(g, p_R)});
            x += len;
        }
    }

    /// Index of the first item whose rear end lies beyond x.
    std::size_t first_after(double x) const
    {
        std::size_t lo = 0;
        std::size_t hi = items.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (items[mid].x_hi <= x)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }
};

}  // namespace oracle
