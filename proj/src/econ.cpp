#include "v2g/econ.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace v2g::econ {

UtilitySpec UtilitySpec::exponential(double a) {
    if (!(a > 0)) throw std::invalid_argument("exponential utility: coefficient must be > 0");
    UtilitySpec u;
    u.kind = UtilityKind::Exponential;
    u.a = a;
    return u;
}

UtilitySpec UtilitySpec::power(double gamma) {
    if (!(gamma > 0 && gamma < 1))
        throw std::invalid_argument("power utility: exponent must lie in (0, 1)");
    UtilitySpec u;
    u.kind = UtilityKind::Power;
    u.gamma = gamma;
    return u;
}

double UtilitySpec::value(double w) const {
    switch (kind) {
    case UtilityKind::Linear:
        return w;
    case UtilityKind::Log:
        if (!(w > 0)) throw std::domain_error("log utility: wealth must be positive, got " +
                                              std::to_string(w));
        return std::log(w);
    case UtilityKind::Exponential:
        return 1.0 - std::exp(-a * w);
    case UtilityKind::Power:
        if (!(w >= 0)) throw std::domain_error("power utility: wealth must be nonnegative, got " +
                                               std::to_string(w));
        return std::pow(w, gamma);
    }
    throw std::logic_error("unknown utility kind");
}

double UtilitySpec::inverse(double v) const {
    switch (kind) {
    case UtilityKind::Linear:
        return v;
    case UtilityKind::Log:
        return std::exp(v);
    case UtilityKind::Exponential:
        if (!(v < 1)) throw std::domain_error("exponential utility: value outside range");
        return -std::log1p(-v) / a;
    case UtilityKind::Power:
        if (!(v >= 0)) throw std::domain_error("power utility: value outside range");
        return std::pow(v, 1.0 / gamma);
    }
    throw std::logic_error("unknown utility kind");
}

namespace {

void check_loss_args(const UtilitySpec& u, double w0, double l, double p) {
    if (!(p >= 0 && p <= 1))
        throw std::invalid_argument("loss probability must lie in [0, 1]");
    if (!(l >= 0)) throw std::invalid_argument("loss must be nonnegative");
    if (u.kind == UtilityKind::Log && !(w0 - l > 0))
        throw std::domain_error("log utility: w0 - l must be positive");
    if (u.kind == UtilityKind::Power && !(w0 - l >= 0))
        throw std::domain_error("power utility: w0 - l must be nonnegative");
}

} // namespace

PremiumResult max_acceptable_premium(const UtilitySpec& u, double w0, double l, double p) {
    check_loss_args(u, w0, l, p);
    PremiumResult res;
    res.expected_loss = p * l;
    if (p == 0.0 || l == 0.0) return res; // m = 0, both components 0
    if (p == 1.0) {
        res.m = l;
        res.risk_premium = 0.0;
        return res;
    }
    switch (u.kind) {
    case UtilityKind::Linear:
        res.m = p * l;
        break;
    case UtilityKind::Log:
        // certainty equivalent is the geometric mean of the two outcomes
        res.m = w0 - std::exp(p * std::log(w0 - l) + (1.0 - p) * std::log(w0));
        break;
    case UtilityKind::Exponential:
        // wealth-independent: exp(a m) = 1 + p (exp(a l) - 1)
        res.m = std::log1p(p * std::expm1(u.a * l)) / u.a;
        break;
    case UtilityKind::Power:
        res.m = w0 - std::pow(p * std::pow(w0 - l, u.gamma) +
                                  (1.0 - p) * std::pow(w0, u.gamma),
                              1.0 / u.gamma);
        break;
    }
    res.risk_premium = res.m - res.expected_loss;
    return res;
}

double premium_bisection(const UtilitySpec& u, double w0, double l, double p, double tol) {
    check_loss_args(u, w0, l, p);
    const double target = p * u.value(w0 - l) + (1.0 - p) * u.value(w0);
    double lo = 0.0, hi = l;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        // u(w0 - m) decreases in m; keep the bracket around the root
        if (u.value(w0 - mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// f(c) with out-of-domain wealth treated as utterly undesirable
double protection_objective(const UtilitySpec& u, double w0, double l, double c, double prob) {
    const double w_loss = w0 - l - c;
    const double w_safe = w0 - c;
    const bool bad = (u.kind == UtilityKind::Log && (w_loss <= 0 || w_safe <= 0)) ||
                     (u.kind == UtilityKind::Power && (w_loss < 0 || w_safe < 0));
    if (bad) return -std::numeric_limits<double>::infinity();
    return prob * u.value(w_loss) + (1.0 - prob) * u.value(w_safe);
}

} // namespace

ProtectionDecision self_protection_decision(const UtilitySpec& u, double w0, double l,
                                            const std::vector<ProtectionStep>& p_of_c,
                                            std::optional<double> insurance_price) {
    if (p_of_c.empty())
        throw std::invalid_argument("self_protection_decision: empty protection table");
    if (p_of_c.front().cost != 0.0)
        throw std::invalid_argument("self_protection_decision: first breakpoint must be at cost 0");
    for (std::size_t i = 0; i < p_of_c.size(); ++i) {
        const auto& s = p_of_c[i];
        if (!(s.prob >= 0 && s.prob <= 1))
            throw std::invalid_argument("self_protection_decision: probabilities must lie in [0, 1]");
        if (i > 0) {
            if (!(s.cost > p_of_c[i - 1].cost))
                throw std::invalid_argument(
                    "self_protection_decision: breakpoint costs must be strictly increasing");
            if (s.prob > p_of_c[i - 1].prob)
                throw std::invalid_argument(
                    "self_protection_decision: loss probability may not increase with spend");
        }
    }

    // Between breakpoints the loss probability is flat, so extra spend only
    // burns wealth: the maximizer sits on a breakpoint.
    ProtectionDecision dec;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : p_of_c) {
        const double f = protection_objective(u, w0, l, s.cost, s.prob);
        if (f > best) {
            best = f;
            dec.c_star = s.cost;
        }
    }
    if (!std::isfinite(best))
        throw std::domain_error("self_protection_decision: no breakpoint keeps wealth in domain");
    dec.f_star = best;

    if (!insurance_price) {
        dec.choice = dec.c_star > 0 ? ProtectChoice::SelfProtect : ProtectChoice::DoNothing;
        dec.spend = dec.c_star;
        return dec;
    }

    const double omega = *insurance_price;
    if (dec.c_star > 0) {
        // protection is worth buying; insurance displaces it only when cheaper
        if (omega < dec.c_star) {
            dec.choice = ProtectChoice::Insure;
            dec.spend = omega;
        } else {
            dec.choice = ProtectChoice::SelfProtect;
            dec.spend = dec.c_star;
        }
    } else {
        // no protection: classical accept/reject against the premium ceiling
        const double ceiling = max_acceptable_premium(u, w0, l, p_of_c.front().prob).m;
        if (omega <= ceiling) {
            dec.choice = ProtectChoice::Insure;
            dec.spend = omega;
        } else {
            dec.choice = ProtectChoice::DoNothing;
            dec.spend = 0.0;
        }
    }
    return dec;
}

namespace {

void check_instance(const IdsInstance& inst) {
    if (!(inst.p >= 0 && inst.p <= 1) || !(inst.q >= 0 && inst.q <= 1))
        throw std::invalid_argument("ids instance: p and q must lie in [0, 1]");
    if (!(inst.l >= 0) || !(inst.c >= 0))
        throw std::invalid_argument("ids instance: l and c must be nonnegative");
}

double risk_premium_at(const IdsInstance& inst, double prob) {
    return max_acceptable_premium(inst.u, inst.w0, inst.l, prob).risk_premium;
}

} // namespace

IdsPayoffs ids_payoffs(const IdsInstance& inst) {
    check_instance(inst);
    const auto& u = inst.u;
    const double pq = inst.p * inst.q;
    IdsPayoffs pay;
    pay.ss = u.value(inst.w0 - inst.c);
    pay.sn = (1.0 - pq) * u.value(inst.w0 - inst.c) + pq * u.value(inst.w0 - inst.c - inst.l);
    pay.ns = (1.0 - inst.p) * u.value(inst.w0) + inst.p * u.value(inst.w0 - inst.l);
    pay.nn = inst.p * u.value(inst.w0 - inst.l) +
             (1.0 - inst.p) * (pq * u.value(inst.w0 - inst.l) + (1.0 - pq) * u.value(inst.w0));
    return pay;
}

IdsThresholds ids_thresholds(const IdsInstance& inst) {
    check_instance(inst);
    const double p = inst.p, q = inst.q, l = inst.l;
    const double pq = p * q;
    IdsThresholds th;
    th.c1 = p * l + risk_premium_at(inst, p);
    th.c2 = p * (1.0 - pq) * l + risk_premium_at(inst, p + (1.0 - p) * pq) -
            risk_premium_at(inst, pq);
    return th;
}

IdsEquilibria ids_equilibria(const IdsInstance& inst) {
    const IdsPayoffs pay = ids_payoffs(inst);
    IdsEquilibria eq;
    // symmetric game: a profile is an equilibrium when neither agent gains by
    // switching, with the column agent's payoffs mirrored from the row's
    eq.ss = pay.ss >= pay.ns;
    eq.nn = pay.nn >= pay.sn;
    eq.sn = pay.sn >= pay.nn && pay.ns >= pay.ss;
    eq.ns = eq.sn;
    const IdsThresholds th = ids_thresholds(inst);
    eq.at_c1 = inst.c == th.c1;
    eq.at_c2 = inst.c == th.c2;
    return eq;
}

IdsRegion classify_by_thresholds(const IdsInstance& inst) {
    const IdsThresholds th = ids_thresholds(inst);
    if (inst.c <= th.c2) return IdsRegion::BothProtect;
    if (inst.c <= th.c1) return IdsRegion::Ambiguous;
    return IdsRegion::NoneProtect;
}

} // namespace v2g::econ
