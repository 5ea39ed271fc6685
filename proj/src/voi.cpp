#include "v2g/voi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2g {

Topology random_topology(int n_stations, double width, double height,
                         const std::vector<double>& price_levels, std::uint64_t seed) {
    if (n_stations <= 0) throw std::invalid_argument("random_topology: need at least one station");
    if (price_levels.empty()) throw std::invalid_argument("random_topology: no price levels");
    Topology topo;
    topo.width = width;
    topo.height = height;
    topo.stations.reserve(n_stations);
    RngStream rng(mix_seed(seed, 1));
    for (int i = 0; i < n_stations; ++i) {
        Station st;
        st.x = rng.uniform() * width;
        st.y = rng.uniform() * height;
        st.price = price_levels[rng.below(static_cast<int>(price_levels.size()))];
        topo.stations.push_back(st);
    }
    return topo;
}

double charge_cost(const VehicleParams& veh, double price, double dist_km) {
    return (veh.battery_kwh + veh.kwh_per_km * dist_km) * price;
}

double discharge_revenue(const VehicleParams& veh, double price, double dist_km) {
    return (veh.battery_kwh - veh.kwh_per_km * dist_km) * price;
}

VoiResult monte_carlo_voi(const Topology& topo, const VehicleParams& veh,
                          ScenarioKind kind, const std::vector<int>& station_counts,
                          long trials, std::uint64_t seed) {
    if (trials <= 0) throw std::invalid_argument("monte_carlo_voi: trials must be positive");
    if (station_counts.empty())
        throw std::invalid_argument("monte_carlo_voi: no station counts given");
    int max_count = 0;
    for (int k : station_counts) {
        if (k <= 0) throw std::invalid_argument("monte_carlo_voi: station counts must be positive");
        max_count = std::max(max_count, k);
    }
    if (max_count > static_cast<int>(topo.stations.size()))
        throw std::invalid_argument("monte_carlo_voi: station count exceeds topology size");

    const std::size_t n_rows = station_counts.size();
    std::vector<double> sum_uninf(n_rows, 0.0), sum_inf(n_rows, 0.0),
        sum_uninf2(n_rows, 0.0), sum_inf2(n_rows, 0.0), sum_voi(n_rows, 0.0),
        sum_voi2(n_rows, 0.0);
    std::vector<double> dist(max_count), value(max_count);

    RngStream veh_rng(mix_seed(seed, 1));
    const bool charging = kind == ScenarioKind::Charge;

    for (long t = 0; t < trials; ++t) {
        const double vx = veh_rng.uniform() * topo.width;
        const double vy = veh_rng.uniform() * topo.height;
        for (int i = 0; i < max_count; ++i) {
            const Station& st = topo.stations[i];
            dist[i] = std::hypot(st.x - vx, st.y - vy);
            value[i] = charging ? charge_cost(veh, st.price, dist[i])
                                : discharge_revenue(veh, st.price, dist[i]);
        }
        for (std::size_t j = 0; j < n_rows; ++j) {
            const int k = station_counts[j];
            int nearest = 0;
            double best = value[0];
            for (int i = 1; i < k; ++i) {
                if (dist[i] < dist[nearest]) nearest = i;
                if (charging ? value[i] < best : value[i] > best) best = value[i];
            }
            const double uninf = value[nearest];
            const double gain = charging ? uninf - best : best - uninf;
            sum_uninf[j] += uninf;
            sum_inf[j] += best;
            sum_uninf2[j] += uninf * uninf;
            sum_inf2[j] += best * best;
            sum_voi[j] += gain;
            sum_voi2[j] += gain * gain;
        }
    }

    VoiResult res;
    res.kind = kind;
    res.trials = trials;
    res.rows.resize(n_rows);
    const double n = static_cast<double>(trials);
    const auto stderr_of = [n, trials](double sum, double sum2) {
        const double mean = sum / n;
        const double var = std::max(0.0, sum2 / n - mean * mean);
        return trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    };
    for (std::size_t j = 0; j < n_rows; ++j) {
        VoiRow& row = res.rows[j];
        row.stations = station_counts[j];
        row.uninformed = sum_uninf[j] / n;
        row.informed = sum_inf[j] / n;
        row.voi = sum_voi[j] / n;
        row.se_uninformed = stderr_of(sum_uninf[j], sum_uninf2[j]);
        row.se_informed = stderr_of(sum_inf[j], sum_inf2[j]);
        row.se_voi = stderr_of(sum_voi[j], sum_voi2[j]);
    }
    return res;
}

} // namespace v2g
