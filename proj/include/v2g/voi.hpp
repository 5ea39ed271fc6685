#pragma once

#include <cstdint>
#include <vector>

#include "v2g/rng.hpp"

namespace v2g {

// Station-choice study: how much a driver gains from seeing every station's
// price and distance instead of defaulting to the nearest station.

struct Station {
    double x = 0.0;
    double y = 0.0;
    double price = 0.0; // per kWh; paid when charging, received when discharging
};

struct Topology {
    double width = 10.0;  // km
    double height = 10.0; // km
    std::vector<Station> stations;
};

struct VehicleParams {
    double battery_kwh = 60.0; // energy exchanged at the station
    double kwh_per_km = 0.2;   // travel consumption
};

// Uniform station positions; each price drawn uniformly from price_levels.
// Per station the draw order is x, y, price.
Topology random_topology(int n_stations, double width, double height,
                         const std::vector<double>& price_levels, std::uint64_t seed);

enum class ScenarioKind { Charge, Discharge };

// Travel burns kwh_per_km per km, so a charging trip buys the battery plus
// the fuel for the trip, and a discharging trip sells the battery minus it.
double charge_cost(const VehicleParams& veh, double price, double dist_km);
double discharge_revenue(const VehicleParams& veh, double price, double dist_km);

struct VoiRow {
    int stations = 0;      // prefix length of the topology used
    double uninformed = 0; // mean cost (charge) or revenue (discharge), nearest station
    double informed = 0;   // mean under the best station
    double voi = 0;        // mean per-trial gain from full information, >= 0
    double se_uninformed = 0;
    double se_informed = 0;
    double se_voi = 0; // standard error of the gain
};

struct VoiResult {
    ScenarioKind kind = ScenarioKind::Charge;
    long trials = 0;
    std::vector<VoiRow> rows; // one per requested station count, input order
};

// Monte Carlo over uniform vehicle positions. Positions are shared across all
// station counts (nested prefixes of the same topology) and across scenario
// kinds run with the same seed: each trial consumes exactly two draws.
VoiResult monte_carlo_voi(const Topology& topo, const VehicleParams& veh,
                          ScenarioKind kind, const std::vector<int>& station_counts,
                          long trials, std::uint64_t seed);

} // namespace v2g
