#include <gtest/gtest.h>

#include <vrelay/deployment.hpp>
#include <vrelay/geometry.hpp>

#include "oracles.hpp"

using namespace vrelay;

TEST(SegmentHits, CylinderAcrossTheMiddle)
{
    const Vec3 a{0.0, 0.0, 1.0};
    const Vec3 b{10.0, 0.0, 1.0};
    EXPECT_TRUE(segment_hits(a, b, Cylinder{5.0, 0.1, 0.3, 1.75}));
    EXPECT_FALSE(segment_hits(a, b, Cylinder{5.0, 0.5, 0.3, 1.75}));
    EXPECT_FALSE(segment_hits(a, b, Cylinder{5.0, 0.0, 0.3, 0.9}));
}

TEST(SegmentHits, RayClimbsOverTheCylinder)
{
    // The ray is at z = 1.5 + 0.85 * 5 = 5.75 above the cylinder at x = 5.
    EXPECT_FALSE(segment_hits(Vec3{0.0, 0.0, 1.5}, Vec3{10.0, 0.0, 10.0}, Cylinder{5.0, 0.0, 0.3, 1.75}));
    EXPECT_TRUE(segment_hits(Vec3{0.0, 0.0, 1.5}, Vec3{10.0, 0.0, 10.0}, Cylinder{0.2, 0.0, 0.3, 1.75}));
}

TEST(SegmentHits, BoxSlabs)
{
    const Box box{2.0, 6.0, -1.0, 1.0, 3.0};
    EXPECT_TRUE(segment_hits(Vec3{0.0, 0.0, 1.0}, Vec3{10.0, 0.0, 1.0}, box));
    EXPECT_FALSE(segment_hits(Vec3{0.0, 0.0, 4.0}, Vec3{10.0, 0.0, 4.0}, box));
    EXPECT_FALSE(segment_hits(Vec3{0.0, 0.0, 1.0}, Vec3{1.9, 0.0, 1.0}, box));
    EXPECT_TRUE(segment_hits(Vec3{4.0, -5.0, 2.0}, Vec3{4.0, 5.0, 2.0}, box));
}

TEST(SegmentHits, AgreesWithDiscretizedWalk)
{
    oracle::Engine g(99);
    int checked = 0;
    int hits = 0;
    for (int scene = 0; scene < 10000; ++scene) {
        const Vec3 a{oracle::unif(g, -10, 10), oracle::unif(g, -10, 10), oracle::unif(g, 0.0, 3.0)};
        const Vec3 b{oracle::unif(g, -10, 10), oracle::unif(g, -10, 10), oracle::unif(g, 0.0, 12.0)};
        // Solids scattered around a point of the segment's ground projection.
        const double t = oracle::unif(g, 0.0, 1.0);
        const Vec3 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), 0.0};
        const Cylinder c{p.x + oracle::unif(g, -1.5, 1.5), p.y + oracle::unif(g, -1.5, 1.5), oracle::unif(g, 0.2, 1.0),
                         oracle::unif(g, 0.5, 6.0)};
        const double x = p.x - oracle::unif(g, 0.0, 8.0);
        const double y = p.y - oracle::unif(g, 0.0, 3.5);
        const Box box{x, x + oracle::unif(g, 1.0, 12.0), y, y + oracle::unif(g, 1.0, 3.0), oracle::unif(g, 1.0, 6.0)};
        const bool cyl = segment_hits(a, b, c);
        const bool bx = segment_hits(a, b, box);
        const bool cyl_ref = oracle::inside(c, a.x, a.y, a.z) || oracle::inside(c, b.x, b.y, b.z) ||
                             oracle::discretized_hit(a, b, c, 0.001);
        const bool box_ref = oracle::inside(box, a.x, a.y, a.z) || oracle::inside(box, b.x, b.y, b.z) ||
                             oracle::discretized_hit(a, b, box, 0.001);
        EXPECT_EQ(cyl, cyl_ref) << "scene " << scene;
        EXPECT_EQ(bx, box_ref) << "scene " << scene;
        checked += 2;
        hits += cyl + bx;
    }
    // Both outcomes must be well represented for the agreement to mean anything.
    EXPECT_GT(hits, checked / 5);
    EXPECT_LT(hits, checked * 4 / 5);
}

TEST(Footprint, PedestrianBetweenTheEndpoints)
{
    const Vec3 ue{50.0, 9.25, 1.5};
    const Vec3 ap{0.0, 0.0, 10.0};
    // On the UE's path, just ahead of the UE toward the AP.
    EXPECT_TRUE(footprint_blocks(ue, ap, Cylinder{49.5, 9.25, 0.3, 1.75}));
    // Behind the UE.
    EXPECT_FALSE(footprint_blocks(ue, ap, Cylinder{50.5, 9.25, 0.3, 1.75}));
    // Far along the link, where the ray is well above head height.
    EXPECT_FALSE(footprint_blocks(ue, ap, Cylinder{25.0, 9.25 * 0.5, 0.3, 1.75}));
    // A blocker taller than the far end always counts.
    EXPECT_TRUE(footprint_blocks(ue, Vec3{0.0, 0.0, 1.6}, Cylinder{25.0, 4.625, 0.3, 1.75}));
}

TEST(FacingSide, OnlyTheFaceTowardTheOriginBlocks)
{
    const Vec3 ue{30.0, 9.25, 1.5};
    const Vec3 ap{0.0, 0.0, 10.0};
    // A side-lane bus beside the UE: the ray leaves through its near lateral
    // face below the roof when the roof is high enough.
    const Box tall{10.0, 40.0, 4.0, 6.5, 5.0};
    const Box low{10.0, 40.0, 4.0, 6.5, 3.0};
    EXPECT_TRUE(facing_side_blocks(ue, ap, tall));
    EXPECT_FALSE(facing_side_blocks(ue, ap, low));
    // The exact test agrees here.
    EXPECT_TRUE(segment_hits(ue, ap, tall));
    EXPECT_FALSE(segment_hits(ue, ap, low));
}

TEST(FacingSide, EndFaceCrossingIsIgnored)
{
    // The origin is beside the box, but the ray passes the lateral face plane
    // before the box starts and enters through its end face; only exact
    // occlusion sees it.
    const Vec3 lo{0.0, 0.0, 1.0};
    const Vec3 hi{20.0, 8.0, 1.0};
    const Box box{6.0, 15.0, 2.0, 6.0, 2.2};
    EXPECT_FALSE(facing_side_blocks(lo, hi, box));
    EXPECT_TRUE(segment_hits(lo, hi, box));
}

TEST(IsBlocked, EmptyInstance)
{
    DeploymentInstance inst;
    EXPECT_FALSE(is_blocked(inst, Vec3{0, 9, 1.5}, Vec3{0, 0, 10}, SimulationMode::analytic()));
    EXPECT_FALSE(is_blocked(inst, Vec3{0, 9, 1.5}, Vec3{0, 0, 10}, SimulationMode::relaxed()));
}

TEST(IsBlocked, PedestrianAtTheMidpoint)
{
    DeploymentInstance inst;
    const Vec3 a{0.0, 9.0, 1.5};
    const Vec3 b{20.0, 9.0, 1.6};
    inst.pedestrians.push_back({10.0, 9.0, 0.3, 1.75});
    EXPECT_TRUE(is_blocked(inst, a, b, SimulationMode::analytic()));
    EXPECT_TRUE(is_blocked(inst, a, b, SimulationMode::relaxed()));
    EXPECT_FALSE(is_blocked(inst, a, b, SimulationMode::relaxed(), BlockerScope{false, true}));
}

TEST(IsBlocked, OwnBodyIsSkipped)
{
    DeploymentInstance inst;
    inst.lanes.push_back({5.25, {Vehicle{Box{8.0, 12.5, 4.35, 6.15, 1.5}, VehicleKind::car, true}}});
    const Vec3 cow = inst.lanes[0].vehicles[0].antenna(1.4);
    EXPECT_FALSE(is_blocked(inst, cow, Vec3{0, 0, 10}, SimulationMode::relaxed()));
    EXPECT_FALSE(is_blocked(inst, cow, Vec3{0, 0, 10}, SimulationMode::analytic()));
}

TEST(IsBlocked, ExactModeMatchesBruteForceOnRandomStreets)
{
    oracle::Engine g(4242);
    const StreetConfig s;
    int blocked = 0;
    const int scenes = 10000;
    for (int scene = 0; scene < scenes; ++scene) {
        DeploymentInstance inst;
        for (int i = 0; i < 6; ++i)
            inst.pedestrians.push_back({oracle::unif(g, -5, 35), oracle::unif(g, 7.0, 10.0), 0.3, 1.75});
        for (double center : lane_centers(s)) {
            Lane lane{center, {}};
            for (double x = oracle::unif(g, -10, 0); x < 40; x += oracle::unif(g, 6, 20)) {
                const bool bus = oracle::coin(g, 0.2);
                const double len = bus ? 12.0 : 4.5;
                const double w = bus ? 2.5 : 1.8;
                const double y = center + oracle::unif(g, -0.5, 0.5) * (s.w_L - w);
                lane.vehicles.push_back(
                    {Box{x, x + len, y - w / 2, y + w / 2, bus ? oracle::unif(g, 3.0, 5.5) : 1.5},
                     bus ? VehicleKind::bus : VehicleKind::car, false});
                x += len;
            }
            inst.lanes.push_back(lane);
        }
        const Vec3 a{oracle::unif(g, 0, 30), oracle::unif(g, 7.5, 10.0), 1.5};
        const Vec3 b{oracle::unif(g, 0, 30), oracle::unif(g, -1, 1), oracle::unif(g, 1.4, 10.0)};
        bool brute = false;
        for (const auto& c : inst.pedestrians)
            brute = brute || (!oracle::inside(c, a.x, a.y, a.z) && !oracle::inside(c, b.x, b.y, b.z) &&
                              oracle::local_hit(a, b, c, c.x - c.radius, c.x + c.radius, c.y - c.radius, c.y + c.radius, 1e-5));
        for (const auto& lane : inst.lanes)
            for (const auto& v : lane.vehicles)
                brute = brute || (!oracle::inside(v.body, a.x, a.y, a.z) && !oracle::inside(v.body, b.x, b.y, b.z) &&
                                  oracle::local_hit(a, b, v.body, v.body.x_lo, v.body.x_hi, v.body.y_lo,
                                                    v.body.y_hi, 1e-5));
        const bool got = is_blocked(inst, a, b, SimulationMode::relaxed());
        EXPECT_EQ(got, brute) << "scene " << scene;
        blocked += got;
    }
    EXPECT_GT(blocked, scenes / 10);
    EXPECT_LT(blocked, scenes * 9 / 10);
}
