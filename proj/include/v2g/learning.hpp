#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "v2g/model.hpp"
#include "v2g/policy.hpp"

namespace v2g {

// rho_t = a / (b + t); divergent sum, summable squares.
struct StepSchedule {
    double a = 20.0;
    double b = 2000.0;
    double rho(long t) const { return a / (b + t); }
};

// Designated recurrent state anchoring regeneration cycles. The default is the
// lowest battery level at the first period while covered, which the chain
// visits often under both the initial uniform policy and trained policies.
struct RecurrentStateSpec {
    PevState s_star{1, 1, 1};
};

struct LearnerState {
    PolicyParams theta;
    std::vector<double> z;  // eligibility trace, theta-shaped
    double psi_tilde = 0.0; // running average-cost estimate
    long t = 0;             // step counter (drives the schedule)
    double kappa = 0.1;
    StepSchedule schedule;

    LearnerState(int B, int P) : theta(B, P), z(theta.size(), 0.0) {}
    explicit LearnerState(PolicyParams params)
        : theta(std::move(params)), z(theta.size(), 0.0) {}
};

// One observed transition within a regeneration cycle.
struct CycleStep {
    PevState s;
    ActionPair a;
    double cost = 0.0;
};

// Gradient step on the full parameter table: theta -= rho * grad.
void idealized_step(PolicyParams& theta, const std::vector<double>& gradient, double rho);

// Batch update at a visit to s*: the cycle covers the steps from one s* visit
// up to (not including) the next. With residuals r_t = cost_t - psi_tilde,
//   q_tilde(t') = sum_{t >= t'} r_t,
//   theta -= rho_m * sum_{t'} q_tilde(t') * score(s_t', a_t'),
//   psi_tilde += kappa * rho_m * sum_t r_t.
// Scores are evaluated at the learner's current (frozen) theta.
void algorithm1_update(LearnerState& learner, std::span<const CycleStep> cycle,
                       double rho_m);

// Online per-step update with eligibility trace:
//   z <- score(s_t, a_t)        if s_t = s*
//        z + score(s_t, a_t)    otherwise
//   theta -= rho * (cost - psi_tilde) * z
//   psi_tilde += kappa * rho * (cost - psi_tilde)
// The explicit-rho overload leaves the step counter untouched (used to replay
// a cycle under a frozen step size); the schedule overload uses rho(t) and
// advances t.
void algorithm2_step(LearnerState& learner, const PevState& s, ActionPair a,
                     double cost, const PevState& s_star, double rho);
void algorithm2_step(LearnerState& learner, const PevState& s, ActionPair a,
                     double cost, const PevState& s_star);

struct LearnerConfig {
    double kappa = 0.1;
    StepSchedule schedule;
    RecurrentStateSpec recurrent;
    long iterations = 100000;
};

struct TrainResult {
    LearnerState learner;
    std::vector<double> psi_trace;      // psi_tilde after each step
    std::vector<double> cum_mean_cost;  // running mean of realized costs
    double mean_cost = 0.0;
    long s_star_visits = 0;
};

// Runs the sample/step/update loop from the start state s* for the given
// number of iterations. The policy stream and environment stream are derived
// from the seed independently, with one policy draw and two environment draws
// per step.
TrainResult train(const EnvConfig& cfg, const LearnerConfig& lc, std::uint64_t seed);

// Environment state matching an observed start at s_star: coverage 1 when
// insured, 0 otherwise; info drawn for the first period from the env stream.
FullEnvState start_state(const EnvConfig& cfg, const PevState& s_star, RngStream& env_rng);

} // namespace v2g
