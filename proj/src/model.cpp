#include "v2g/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace v2g {

EnvConfig default_env() {
    EnvConfig cfg;
    cfg.B = 6;
    cfg.P = 4;
    cfg.cost = CostModel{};
    cfg.prices.charge_avail = {10.5, 10.0, 9.5, 9.0};
    cfg.prices.charge_unavail = {14.5, 14.0, 13.5, 13.0};
    cfg.prices.discharge_avail = {15.5, 15.0, 14.5, 14.0};
    cfg.prices.discharge_unavail = {11.5, 11.0, 10.5, 10.0};
    cfg.risk.unavail_prob = {0.1, 0.1, 0.1, 0.1};
    return cfg;
}

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw std::invalid_argument("config field '" + field + "': " + why);
}

void check_table(const std::vector<double>& t, int P, const std::string& name) {
    require(static_cast<int>(t.size()) == P, name,
            "expected length " + std::to_string(P) + ", got " + std::to_string(t.size()));
}

} // namespace

void validate(const EnvConfig& cfg) {
    require(cfg.B >= 1, "B", "battery levels must be >= 1");
    require(cfg.P >= 1, "P", "periods must be >= 1");
    require(cfg.cost.coverage_len >= 1, "coverage_len", "must be >= 1");
    require(cfg.cost.premium >= 0, "premium", "must be >= 0");
    require(cfg.cost.h1 >= 0, "h1", "must be >= 0");
    require(cfg.cost.h2 > cfg.cost.h1, "h2", "must exceed h1");
    require(cfg.cost.consumption_rate >= 0 && cfg.cost.consumption_rate <= 1,
            "consumption_rate", "must be a probability");
    check_table(cfg.prices.charge_avail, cfg.P, "charge_avail");
    check_table(cfg.prices.charge_unavail, cfg.P, "charge_unavail");
    check_table(cfg.prices.discharge_avail, cfg.P, "discharge_avail");
    check_table(cfg.prices.discharge_unavail, cfg.P, "discharge_unavail");
    check_table(cfg.risk.unavail_prob, cfg.P, "unavail_prob");
    for (int p = 0; p < cfg.P; ++p) {
        require(cfg.prices.charge_avail[p] <= cfg.prices.charge_unavail[p],
                "charge_avail", "available price must not exceed unavailable price");
        require(cfg.prices.discharge_avail[p] >= cfg.prices.discharge_unavail[p],
                "discharge_avail", "available revenue must not fall below unavailable revenue");
        require(cfg.risk.unavail_prob[p] >= 0 && cfg.risk.unavail_prob[p] <= 1,
                "unavail_prob", "entries must be probabilities");
    }
}

std::vector<ActionPair> valid_actions(const PevState& s, int B) {
    std::vector<ActionPair> out;
    out.reserve(6);
    for (A1 a1 : {A1::Idle, A1::Charge, A1::Discharge}) {
        if (a1 == A1::Charge && s.b == B) continue;
        if (a1 == A1::Discharge && s.b == 1) continue;
        for (A2 a2 : {A2::NoBuy, A2::Buy}) out.push_back({a1, a2});
    }
    return out;
}

bool is_valid_action(const PevState& s, int B, ActionPair a) {
    if (a.a1 == A1::Charge && s.b == B) return false;
    if (a.a1 == A1::Discharge && s.b == 1) return false;
    return true;
}

namespace {

CostParts parts_impl(const EnvConfig& cfg, int b, int p, int i, int info, ActionPair a) {
    const bool covered = (i == 1) || (a.a2 == A2::Buy);
    const bool effective_info = (info == 1) || covered;
    CostParts parts;
    if (a.a1 == A1::Charge) {
        parts.charging = effective_info ? cfg.prices.charge_avail[p - 1]
                                        : cfg.prices.charge_unavail[p - 1];
    } else if (a.a1 == A1::Discharge) {
        parts.discharging_revenue = effective_info ? cfg.prices.discharge_avail[p - 1]
                                                   : cfg.prices.discharge_unavail[p - 1];
    } else if (b == 1) {
        parts.penalty = covered ? cfg.cost.h2 : cfg.cost.h1;
    }
    if (a.a2 == A2::Buy) parts.premium = cfg.cost.premium;
    return parts;
}

double cost_impl(const EnvConfig& cfg, int b, int p, int i, int info, ActionPair a) {
    return parts_impl(cfg, b, p, i, info, a).total();
}

} // namespace

double immediate_cost(const EnvConfig& cfg, const FullEnvState& s, ActionPair a) {
    if (!is_valid_action(s.pev, cfg.B, a))
        throw std::invalid_argument("immediate_cost: action invalid at this battery level");
    return cost_impl(cfg, s.pev.b, s.pev.p, s.pev.i, s.info_available, a);
}

CostParts immediate_cost_parts(const EnvConfig& cfg, const FullEnvState& s, ActionPair a) {
    if (!is_valid_action(s.pev, cfg.B, a))
        throw std::invalid_argument("immediate_cost_parts: action invalid at this battery level");
    return parts_impl(cfg, s.pev.b, s.pev.p, s.pev.i, s.info_available, a);
}

StepOutcome env_step(const EnvConfig& cfg, const FullEnvState& s, ActionPair a,
                     RngStream& rng) {
    if (!is_valid_action(s.pev, cfg.B, a))
        throw std::invalid_argument("env_step: action invalid at this battery level");
    StepOutcome out;
    out.cost = cost_impl(cfg, s.pev.b, s.pev.p, s.pev.i, s.info_available, a);

    // fixed draw order: consumption first, then next-period info availability
    const int consumed = rng.bernoulli(cfg.cost.consumption_rate) ? 1 : 0;
    const int delta = (a.a1 == A1::Charge ? 1 : 0) - (a.a1 == A1::Discharge ? 1 : 0);
    const int b_next = std::clamp(s.pev.b + delta - consumed, 1, cfg.B);
    const int p_next = s.pev.p % cfg.P + 1;
    const int cov_next = (a.a2 == A2::Buy) ? cfg.cost.coverage_len
                                           : std::max(s.coverage_remaining - 1, 0);
    const int info_next = rng.bernoulli(1.0 - cfg.risk.unavail_prob[p_next - 1]) ? 1 : 0;

    out.next.pev = {b_next, p_next, cov_next > 0 ? 1 : 0};
    out.next.coverage_remaining = cov_next;
    out.next.info_available = info_next;
    return out;
}

double expected_cost(const EnvConfig& cfg, const PevState& s_obs, int coverage,
                     ActionPair a) {
    if (!is_valid_action(s_obs, cfg.B, a))
        throw std::invalid_argument("expected_cost: action invalid at this battery level");
    if ((s_obs.i == 1) != (coverage > 0))
        throw std::invalid_argument("expected_cost: indicator i inconsistent with coverage");
    const double l = cfg.risk.unavail_prob[s_obs.p - 1];
    return l * cost_impl(cfg, s_obs.b, s_obs.p, s_obs.i, 0, a) +
           (1.0 - l) * cost_impl(cfg, s_obs.b, s_obs.p, s_obs.i, 1, a);
}

} // namespace v2g
