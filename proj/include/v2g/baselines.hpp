#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "v2g/model.hpp"
#include "v2g/policy.hpp"

namespace v2g {

// Always-insured baseline: buys whenever the absolute period clock t = 1, 2,
// ... satisfies t = 1 (mod coverage_len); charges at the lowest level, else
// picks uniformly among the valid a1 choices. Consumes exactly one draw.
ActionPair ip_action(const PevState& s, long clock, int B, int coverage_len,
                     RngStream& rng);

// Never-insured baseline: same a1 rule, never buys. Consumes exactly one draw.
ActionPair wp_action(const PevState& s, int B, RngStream& rng);

// Any per-step decision rule: observation, absolute clock (1-based), one
// policy-stream draw per call.
using PolicyFn = std::function<ActionPair(const PevState&, long clock, RngStream&)>;

PolicyFn make_ip_policy(int B, int coverage_len);
PolicyFn make_wp_policy(int B);
PolicyFn make_softmax_policy(PolicyParams theta); // frozen parameters

struct EvalReport {
    double avg_total_cost = 0.0;
    double avg_charging_cost = 0.0;
    double avg_discharging_profit = 0.0;
    double insurance_buy_rate = 0.0; // purchases per period
    double avg_insurance_cost = 0.0;
    double avg_penalty_cost = 0.0;
    double coverage_rate = 0.0; // fraction of periods covered
    // standard errors across replications (zero with one replication)
    double se_total_cost = 0.0;
    double se_charging_cost = 0.0;
    double se_discharging_profit = 0.0;
    double se_buy_rate = 0.0;
    double se_insurance_cost = 0.0;
    double se_penalty_cost = 0.0;
    long horizon = 0;
    int replications = 0;
};

// Time-averaged metrics over `replications` independent runs of `horizon`
// periods each, started from start_obs. Component sums are accumulated
// separately, so the ledger identity
//   avg_total = avg_charging - avg_discharging_profit + avg_insurance + avg_penalty
// holds exactly by construction. Streams are derived from seed per
// replication; every step consumes one policy draw and two env draws.
EvalReport evaluate_policy(const EnvConfig& cfg, const PolicyFn& policy,
                           const PevState& start_obs, long horizon, int replications,
                           std::uint64_t seed);

} // namespace v2g
