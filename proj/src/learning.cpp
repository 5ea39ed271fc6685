#include "v2g/learning.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2g {

void idealized_step(PolicyParams& theta, const std::vector<double>& gradient, double rho) {
    if (gradient.size() != theta.raw().size())
        throw std::invalid_argument("idealized_step: gradient shape mismatch");
    for (std::size_t k = 0; k < gradient.size(); ++k) theta.raw()[k] -= rho * gradient[k];
}

void algorithm1_update(LearnerState& learner, std::span<const CycleStep> cycle,
                       double rho_m) {
    if (cycle.empty()) throw std::invalid_argument("algorithm1_update: empty cycle");

    // suffix sums of residuals give q_tilde per step
    const std::size_t n = cycle.size();
    std::vector<double> q_tilde(n);
    double suffix = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        suffix += cycle[k].cost - learner.psi_tilde;
        q_tilde[k] = suffix;
    }
    // F_m = sum q_tilde * score, assembled at the frozen theta
    std::vector<double> F(learner.theta.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const ScoreBlock sb = score(learner.theta, cycle[k].s, cycle[k].a);
        const int base = learner.theta.block_start(sb.s);
        for (std::size_t ai = 0; ai < sb.g.size(); ++ai)
            F[base + ai] += q_tilde[k] * sb.g[ai];
    }
    for (std::size_t k = 0; k < F.size(); ++k) learner.theta.raw()[k] -= rho_m * F[k];
    learner.psi_tilde += learner.kappa * rho_m * suffix; // suffix now holds sum of residuals
}

void algorithm2_step(LearnerState& learner, const PevState& s, ActionPair a,
                     double cost, const PevState& s_star, double rho) {
    const ScoreBlock sb = score(learner.theta, s, a);
    if (s == s_star) std::fill(learner.z.begin(), learner.z.end(), 0.0);
    const int base = learner.theta.block_start(s);
    for (std::size_t ai = 0; ai < sb.g.size(); ++ai) learner.z[base + ai] += sb.g[ai];

    const double resid = cost - learner.psi_tilde;
    for (std::size_t k = 0; k < learner.z.size(); ++k)
        learner.theta.raw()[k] -= rho * resid * learner.z[k];
    learner.psi_tilde += learner.kappa * rho * resid;
}

void algorithm2_step(LearnerState& learner, const PevState& s, ActionPair a,
                     double cost, const PevState& s_star) {
    algorithm2_step(learner, s, a, cost, s_star, learner.schedule.rho(learner.t));
    ++learner.t;
}

FullEnvState start_state(const EnvConfig& cfg, const PevState& s_star, RngStream& env_rng) {
    FullEnvState s;
    s.pev = s_star;
    s.coverage_remaining = s_star.i == 1 ? 1 : 0;
    s.info_available = env_rng.bernoulli(1.0 - cfg.risk.unavail_prob[s_star.p - 1]) ? 1 : 0;
    return s;
}

TrainResult train(const EnvConfig& cfg, const LearnerConfig& lc, std::uint64_t seed) {
    validate(cfg);
    if (lc.iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");

    RngStream env_rng(mix_seed(seed, 1));
    RngStream policy_rng(mix_seed(seed, 2));

    TrainResult out{LearnerState(cfg.B, cfg.P)};
    out.learner.kappa = lc.kappa;
    out.learner.schedule = lc.schedule;
    out.psi_trace.reserve(lc.iterations);
    out.cum_mean_cost.reserve(lc.iterations);

    const PevState s_star = lc.recurrent.s_star;
    FullEnvState s = start_state(cfg, s_star, env_rng);
    double cost_sum = 0.0;
    for (long t = 0; t < lc.iterations; ++t) {
        const PevState obs = s.pev;
        if (obs == s_star) ++out.s_star_visits;
        const ActionPair a = sample_action(out.learner.theta, obs, policy_rng);
        const StepOutcome step = env_step(cfg, s, a, env_rng);
        algorithm2_step(out.learner, obs, a, step.cost, s_star);
        cost_sum += step.cost;
        out.psi_trace.push_back(out.learner.psi_tilde);
        out.cum_mean_cost.push_back(cost_sum / static_cast<double>(t + 1));
        s = step.next;
    }
    out.mean_cost = lc.iterations > 0 ? cost_sum / static_cast<double>(lc.iterations) : 0.0;
    return out;
}

} // namespace v2g
