#pragma once

#include <vector>

#include "v2g/rng.hpp"

namespace v2g {

enum class A1 : int { Idle = 0, Charge = 1, Discharge = 2 };
enum class A2 : int { NoBuy = 0, Buy = 1 };

struct ActionPair {
    A1 a1 = A1::Idle;
    A2 a2 = A2::NoBuy;
    bool operator==(const ActionPair&) const = default;
};

// The learner-observable state: battery level b in [1,B], period p in [1,P],
// insurance indicator i in {0,1}.
struct PevState {
    int b = 1;
    int p = 1;
    int i = 0;
    bool operator==(const PevState&) const = default;
};

// The environment's richer internal state. The binary indicator i mirrors
// coverage_remaining > 0 at all times; info_available is redrawn each period.
struct FullEnvState {
    PevState pev;
    int coverage_remaining = 0;
    int info_available = 1;
};

struct PriceSchedule {
    std::vector<double> charge_avail;      // charge price per period, info available
    std::vector<double> charge_unavail;    // charge price, info unavailable
    std::vector<double> discharge_avail;   // discharge revenue, info available
    std::vector<double> discharge_unavail; // discharge revenue, info unavailable
};

struct RiskModel {
    std::vector<double> unavail_prob; // per-period probability info is unavailable
};

struct CostModel {
    double premium = 1.0;          // m, paid at purchase
    int coverage_len = 4;          // nu, periods of coverage per purchase
    double h1 = 20.0;              // depletion penalty, uncovered
    double h2 = 22.0;              // depletion penalty, covered (h2 > h1)
    double consumption_rate = 0.6; // lambda, per-period Bernoulli consumption
};

struct EnvConfig {
    int B = 6;
    int P = 4;
    CostModel cost;
    PriceSchedule prices;
    RiskModel risk;
};

// The IV-D experimental configuration.
EnvConfig default_env();

// Throws std::invalid_argument naming the offending field.
void validate(const EnvConfig& cfg);

// Valid composite actions at s: Idle always, Charge unless b=B, Discharge
// unless b=1, each paired with both insurance choices. Order is canonical
// (a1 ascending, a2 inner ascending) and shared by the policy tables.
std::vector<ActionPair> valid_actions(const PevState& s, int B);
bool is_valid_action(const PevState& s, int B, ActionPair a);

// Signed immediate cost: charge price (or minus discharge revenue) at the
// state's period under the effective information, plus the depletion penalty
// when idling at the lowest level, plus the premium when buying. Coverage --
// already insured or buying right now -- substitutes for availability.
double immediate_cost(const EnvConfig& cfg, const FullEnvState& s, ActionPair a);

// The same cost split into its signed components; total() reassembles the
// immediate cost exactly, so ledgers built from the parts balance.
struct CostParts {
    double charging = 0.0;            // energy purchase outlay
    double discharging_revenue = 0.0; // energy sale revenue
    double premium = 0.0;             // insurance purchase
    double penalty = 0.0;            // depletion penalty
    double total() const { return charging - discharging_revenue + premium + penalty; }
};

CostParts immediate_cost_parts(const EnvConfig& cfg, const FullEnvState& s, ActionPair a);

struct StepOutcome {
    FullEnvState next;
    double cost = 0.0;
};

// One environment transition. Consumes exactly two draws from rng, in fixed
// order: consumption Bernoulli(lambda), then next-period info availability.
// Keeping the draw count fixed lets different policies share an environment
// stream (common random numbers).
StepOutcome env_step(const EnvConfig& cfg, const FullEnvState& s, ActionPair a,
                     RngStream& rng);

// Immediate cost averaged over the info-availability draw at (b, p) given the
// coverage counter: l_p * cost(unavail) + (1-l_p) * cost(avail).
double expected_cost(const EnvConfig& cfg, const PevState& s_obs, int coverage,
                     ActionPair a);

} // namespace v2g
