#include "v2g/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "v2g/learning.hpp"

namespace v2g {

namespace {

// Shared a1 rule for the two reference policies: charge out of the lowest
// level, otherwise pick uniformly among the valid moves. The draw happens
// unconditionally so that every policy consumes one stream value per step.
A1 reference_a1(const PevState& s, int B, RngStream& rng) {
    const double u = rng.uniform();
    if (B == 1) return A1::Idle;
    if (s.b == 1) return A1::Charge;
    if (s.b == B) return u < 0.5 ? A1::Idle : A1::Discharge;
    if (u < 1.0 / 3.0) return A1::Idle;
    if (u < 2.0 / 3.0) return A1::Charge;
    return A1::Discharge;
}

} // namespace

ActionPair ip_action(const PevState& s, long clock, int B, int coverage_len,
                     RngStream& rng) {
    const A1 a1 = reference_a1(s, B, rng);
    const bool renew = (clock - 1) % coverage_len == 0;
    return {a1, renew ? A2::Buy : A2::NoBuy};
}

ActionPair wp_action(const PevState& s, int B, RngStream& rng) {
    return {reference_a1(s, B, rng), A2::NoBuy};
}

PolicyFn make_ip_policy(int B, int coverage_len) {
    return [B, coverage_len](const PevState& s, long clock, RngStream& rng) {
        return ip_action(s, clock, B, coverage_len, rng);
    };
}

PolicyFn make_wp_policy(int B) {
    return [B](const PevState& s, long, RngStream& rng) { return wp_action(s, B, rng); };
}

PolicyFn make_softmax_policy(PolicyParams theta) {
    return [theta = std::move(theta)](const PevState& s, long, RngStream& rng) {
        return sample_action(theta, s, rng);
    };
}

EvalReport evaluate_policy(const EnvConfig& cfg, const PolicyFn& policy,
                           const PevState& start_obs, long horizon, int replications,
                           std::uint64_t seed) {
    validate(cfg);
    if (horizon <= 0) throw std::invalid_argument("evaluate_policy: horizon must be positive");
    if (replications <= 0)
        throw std::invalid_argument("evaluate_policy: replications must be positive");

    // per-replication means of each ledger component
    std::vector<double> total(replications), charging(replications),
        discharging(replications), buys(replications), premium(replications),
        penalty(replications), covered(replications);

    for (int r = 0; r < replications; ++r) {
        RngStream env_rng(mix_seed(seed, 2 * static_cast<std::uint64_t>(r) + 1));
        RngStream pol_rng(mix_seed(seed, 2 * static_cast<std::uint64_t>(r) + 2));
        FullEnvState s = start_state(cfg, start_obs, env_rng);

        double sum_charge = 0, sum_discharge = 0, sum_premium = 0, sum_penalty = 0;
        long n_buys = 0, n_covered = 0;
        for (long t = 1; t <= horizon; ++t) {
            const ActionPair a = policy(s.pev, t, pol_rng);
            const CostParts parts = immediate_cost_parts(cfg, s, a);
            sum_charge += parts.charging;
            sum_discharge += parts.discharging_revenue;
            sum_premium += parts.premium;
            sum_penalty += parts.penalty;
            if (a.a2 == A2::Buy) ++n_buys;
            if (s.pev.i == 1 || a.a2 == A2::Buy) ++n_covered;
            s = env_step(cfg, s, a, env_rng).next;
        }
        const double h = static_cast<double>(horizon);
        charging[r] = sum_charge / h;
        discharging[r] = sum_discharge / h;
        premium[r] = sum_premium / h;
        penalty[r] = sum_penalty / h;
        buys[r] = static_cast<double>(n_buys) / h;
        covered[r] = static_cast<double>(n_covered) / h;
        total[r] = charging[r] - discharging[r] + premium[r] + penalty[r];
    }

    auto mean = [&](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto stderr_of = [&](const std::vector<double>& v, double m) {
        if (v.size() < 2) return 0.0;
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        const double n = static_cast<double>(v.size());
        return std::sqrt(ss / (n - 1.0) / n);
    };

    EvalReport rep;
    rep.avg_charging_cost = mean(charging);
    rep.avg_discharging_profit = mean(discharging);
    rep.avg_insurance_cost = mean(premium);
    rep.avg_penalty_cost = mean(penalty);
    rep.insurance_buy_rate = mean(buys);
    rep.coverage_rate = mean(covered);
    rep.avg_total_cost = rep.avg_charging_cost - rep.avg_discharging_profit +
                         rep.avg_insurance_cost + rep.avg_penalty_cost;
    rep.se_charging_cost = stderr_of(charging, rep.avg_charging_cost);
    rep.se_discharging_profit = stderr_of(discharging, rep.avg_discharging_profit);
    rep.se_insurance_cost = stderr_of(premium, rep.avg_insurance_cost);
    rep.se_penalty_cost = stderr_of(penalty, rep.avg_penalty_cost);
    rep.se_buy_rate = stderr_of(buys, rep.insurance_buy_rate);
    rep.se_total_cost = stderr_of(total, rep.avg_total_cost);
    rep.horizon = horizon;
    rep.replications = replications;
    return rep;
}

} // namespace v2g
