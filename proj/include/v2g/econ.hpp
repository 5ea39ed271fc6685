#pragma once

#include <optional>
#include <vector>

namespace v2g::econ {

// Concave, strictly increasing utility of wealth. Four standard families:
// linear u(w)=w, logarithmic u(w)=ln w (w>0), exponential u(w)=1-exp(-a w)
// with a>0, and power u(w)=w^g with 0<g<1 (w>=0).
enum class UtilityKind { Linear, Log, Exponential, Power };

struct UtilitySpec {
    UtilityKind kind = UtilityKind::Linear;
    double a = 1.0;     // exponential coefficient
    double gamma = 0.5; // power exponent

    static UtilitySpec linear() { return {UtilityKind::Linear}; }
    static UtilitySpec logarithmic() { return {UtilityKind::Log}; }
    static UtilitySpec exponential(double a);
    static UtilitySpec power(double gamma);

    double value(double w) const;   // u(w); throws std::domain_error outside the domain
    double inverse(double v) const; // u^{-1}(v) on u's range
};

struct PremiumResult {
    double m = 0.0;             // maximum acceptable premium
    double expected_loss = 0.0; // p * l, the fair premium
    double risk_premium = 0.0;  // m - p*l, nonnegative for concave u
};

// Premium at which the agent is indifferent between insuring and bearing a
// loss of l with probability p:  p u(w0-l) + (1-p) u(w0) = u(w0-m).
// Solved in closed form per family (linear exactly m = p*l); p=0 and p=1
// short-circuit to 0 and l.
PremiumResult max_acceptable_premium(const UtilitySpec& u, double w0, double l, double p);

// Generic bisection solver for the same equation on m in [0, l]; the
// closed forms above are cross-checked against it in the tests.
double premium_bisection(const UtilitySpec& u, double w0, double l, double p,
                         double tol = 1e-10);

// Piecewise-constant protection technology: prob applies to any spend from
// cost up to the next breakpoint. The first breakpoint must be at cost 0 and
// probabilities must be non-increasing in cost.
struct ProtectionStep {
    double cost = 0.0;
    double prob = 0.0;
};

enum class ProtectChoice { DoNothing, SelfProtect, Insure };

struct ProtectionDecision {
    double c_star = 0.0; // spend maximizing f(c) = p[c] u(w0-l-c) + (1-p[c]) u(w0-c)
    double f_star = 0.0;
    ProtectChoice choice = ProtectChoice::DoNothing;
    double spend = 0.0; // amount committed under the chosen option
};

// Maximizes f(c) over the table's breakpoints (between breakpoints f only
// falls, so the breakpoints are exhaustive). With an insurance price given:
// a positive c* is displaced by insurance priced strictly below it; with
// c* = 0 insurance is bought when its price is at most the maximum
// acceptable premium at the unprotected loss probability.
ProtectionDecision self_protection_decision(const UtilitySpec& u, double w0, double l,
                                            const std::vector<ProtectionStep>& p_of_c,
                                            std::optional<double> insurance_price = {});

// Two symmetric agents; each suffers the loss l directly with probability p,
// and indirectly -- via an unprotected peer -- with probability q.
struct IdsInstance {
    double p = 0.1;  // direct loss probability
    double q = 0.1;  // contagion probability
    double l = 1.0;  // loss
    double c = 0.1;  // self-protection cost
    double w0 = 10.0;
    UtilitySpec u;
};

// Expected payoffs of the row agent; S = self-protection, N = none.
struct IdsPayoffs {
    double ss = 0.0; // u(w0-c)
    double sn = 0.0; // (1-pq) u(w0-c) + pq u(w0-c-l)
    double ns = 0.0; // (1-p) u(w0) + p u(w0-l)
    double nn = 0.0; // p u(w0-l) + (1-p)(pq u(w0-l) + (1-pq) u(w0))
};

IdsPayoffs ids_payoffs(const IdsInstance& inst);

// Protection-cost thresholds: c1 = pl + pi[p],
// c2 = p(1-pq)l + pi[p+(1-p)pq] - pi[pq], with pi[x] the risk premium of a
// loss of l at probability x.
struct IdsThresholds {
    double c1 = 0.0;
    double c2 = 0.0;
};

IdsThresholds ids_thresholds(const IdsInstance& inst);

struct IdsEquilibria {
    bool ss = false;
    bool sn = false; // holds iff ns holds (symmetric game)
    bool ns = false;
    bool nn = false;
    bool at_c1 = false; // c exactly equals a threshold; classification is
    bool at_c2 = false; // boundary-sensitive there
};

// All pure Nash equilibria of the 2x2 payoff matrix by best-response
// enumeration; ties count as equilibria (weak best responses).
IdsEquilibria ids_equilibria(const IdsInstance& inst);

// The closed-form classification: c <= c2 -> both protect; c2 < c <= c1 ->
// both (S,S) and (N,N) self-consistent; c1 < c -> neither protects. Valid
// where c2 <= c1.
enum class IdsRegion { BothProtect, Ambiguous, NoneProtect };

IdsRegion classify_by_thresholds(const IdsInstance& inst);

} // namespace v2g::econ
