#pragma once

#include "compound.hpp"
#include "config.hpp"
#include "distribution.hpp"

namespace vrelay {

/// A street/stochastic configuration pair together with the distributions the
/// analytic model derives from it. Immutable after construction.
class Scenario
{
public:
    Scenario(StreetConfig street, StochasticConfig stochastic)
        : street_(street),
          stochastic_(stochastic),
          pedestrian_gap_(stochastic.pedestrian_gap),
          vehicle_gap_(stochastic.vehicle_gap),
          bus_gap_(stochastic.p_T, street.car.length, vehicle_gap_),
          relay_spacing_(street, stochastic, vehicle_gap_)
    {
    }

    const StreetConfig& street() const { return street_; }
    const StochasticConfig& stochastic() const { return stochastic_; }

    /// Gap between neighboring pedestrians on one path.
    const Distribution& pedestrian_gap() const { return pedestrian_gap_; }
    /// F_D: bumper-to-bumper gap between consecutive vehicles of a lane.
    const Distribution& vehicle_gap() const { return vehicle_gap_; }
    /// F_{D_B}.
    const BusGapDistribution& bus_gap() const { return bus_gap_; }
    /// F_{L_R}.
    const RelaySpacingDistribution& relay_spacing() const { return relay_spacing_; }

    /// Mean length of one lane cycle (vehicle plus gap).
    double mean_vehicle_spacing() const
    {
        const auto& s = stochastic_;
        return s.p_T * street_.bus.length + (1.0 - s.p_T) * street_.car.length + vehicle_gap_.mean();
    }

private:
    StreetConfig street_;
    StochasticConfig stochastic_;
    Distribution pedestrian_gap_;
    Distribution vehicle_gap_;
    BusGapDistribution bus_gap_;
    RelaySpacingDistribution relay_spacing_;
};

}  // namespace vrelay
