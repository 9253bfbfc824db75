#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace vrelay {

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Upright cylinder standing on the ground, centered at (x, y).
struct Cylinder
{
    double x;
    double y;
    double radius;
    double height;
};

/// Axis-aligned box standing on the ground.
struct Box
{
    double x_lo;
    double x_hi;
    double y_lo;
    double y_hi;
    double height;
};

inline bool contains(const Cylinder& c, const Vec3& p)
{
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    return p.z >= 0.0 && p.z <= c.height && dx * dx + dy * dy <= c.radius * c.radius;
}

inline bool contains(const Box& b, const Vec3& p)
{
    return p.x >= b.x_lo && p.x <= b.x_hi && p.y >= b.y_lo && p.y <= b.y_hi && p.z >= 0.0 && p.z <= b.height;
}

namespace detail {

/// Narrows [t0, t1] to the parameters where start + t * step lies in [lo, hi].
inline bool clip_slab(double start, double step, double lo, double hi, double& t0, double& t1)
{
    if (step == 0.0)
        return start >= lo && start <= hi;
    double a = (lo - start) / step;
    double b = (hi - start) / step;
    if (a > b)
        std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return t0 < t1;
}

inline Vec3 lerp(const Vec3& a, const Vec3& b, double t)
{
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z)};
}

}  // namespace detail

/// Exact test: does the open segment a-b pass through the solid cylinder over
/// a parameter interval of positive length?
inline bool segment_hits(const Vec3& a, const Vec3& b, const Cylinder& c)
{
    double t0 = 0.0;
    double t1 = 1.0;
    if (!detail::clip_slab(a.z, b.z - a.z, 0.0, c.height, t0, t1))
        return false;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double fx = a.x - c.x;
    const double fy = a.y - c.y;
    const double qa = dx * dx + dy * dy;
    const double qb = 2.0 * (fx * dx + fy * dy);
    const double qc = fx * fx + fy * fy - c.radius * c.radius;
    if (qa == 0.0)
        return qc <= 0.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0)
        return false;
    const double root = std::sqrt(disc);
    const double r0 = (-qb - root) / (2.0 * qa);
    const double r1 = (-qb + root) / (2.0 * qa);
    return std::max(t0, r0) < std::min(t1, r1);
}

/// Exact test for the open segment against a solid box.
inline bool segment_hits(const Vec3& a, const Vec3& b, const Box& box)
{
    double t0 = 0.0;
    double t1 = 1.0;
    return detail::clip_slab(a.x, b.x - a.x, box.x_lo, box.x_hi, t0, t1) &&
           detail::clip_slab(a.y, b.y - a.y, box.y_lo, box.y_hi, t0, t1) &&
           detail::clip_slab(a.z, b.z - a.z, 0.0, box.height, t0, t1);
}

/// Footprint rule for pedestrians seen from the lower endpoint `origin`: the
/// cylinder's center must lie within `radius` of the link's ground
/// projection, strictly between the endpoints, and laterally no farther from
/// the origin than the ray stays below the cylinder top (plus one radius).
inline bool footprint_blocks(const Vec3& origin, const Vec3& far, const Cylinder& c)
{
    if (origin.z >= c.height)
        return false;
    const double ex = far.x - origin.x;
    const double ey = far.y - origin.y;
    const double length = std::hypot(ex, ey);
    if (length == 0.0)
        return false;
    const double cx = c.x - origin.x;
    const double cy = c.y - origin.y;
    const double along = (cx * ex + cy * ey) / length;
    const double across = (cx * ey - cy * ex) / length;
    if (std::abs(across) > c.radius || !(along > 0.0) || !(along < length))
        return false;
    double reach = std::numeric_limits<double>::infinity();
    if (far.z > c.height)
        reach = c.radius + std::abs(ey) * (c.height - origin.z) / (far.z - origin.z);
    return std::abs(cy) <= reach;
}

/// Facing-side rule for boxes seen from the lower endpoint `origin`: only the
/// face turned toward the origin can block (the lateral face when the origin
/// is outside the box's lateral band, else the nearer end face).
inline bool facing_side_blocks(const Vec3& origin, const Vec3& far, const Box& box)
{
    const bool beside = origin.y < box.y_lo || origin.y > box.y_hi;
    if (beside) {
        const double face = origin.y > box.y_hi ? box.y_hi : box.y_lo;
        if (far.y == origin.y)
            return false;
        const double t = (face - origin.y) / (far.y - origin.y);
        if (!(t > 0.0 && t < 1.0))
            return false;
        const Vec3 p = detail::lerp(origin, far, t);
        return p.x >= box.x_lo && p.x <= box.x_hi && p.z <= box.height;
    }
    if (origin.x >= box.x_lo && origin.x <= box.x_hi)
        return false;
    const double face = origin.x > box.x_hi ? box.x_hi : box.x_lo;
    if (far.x == origin.x)
        return false;
    const double t = (face - origin.x) / (far.x - origin.x);
    if (!(t > 0.0 && t < 1.0))
        return false;
    const Vec3 p = detail::lerp(origin, far, t);
    return p.y >= box.y_lo && p.y <= box.y_hi && p.z <= box.height;
}

}  // namespace vrelay
