#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "v2g/econ.hpp"
#include "v2g/rng.hpp"

using namespace v2g;
using namespace v2g::econ;

TEST_CASE("utility families: values, inverses, and domains") {
    const UtilitySpec lin = UtilitySpec::linear();
    const UtilitySpec log_u = UtilitySpec::logarithmic();
    const UtilitySpec exp_u = UtilitySpec::exponential(0.3);
    const UtilitySpec pow_u = UtilitySpec::power(0.5);

    CHECK(lin.value(3.25) == 3.25);
    CHECK(log_u.value(std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exp_u.value(0.0) == 0.0);
    CHECK(pow_u.value(9.0) == doctest::Approx(3.0).epsilon(1e-12));

    for (double w : {0.5, 1.0, 7.3, 42.0}) {
        CHECK(lin.inverse(lin.value(w)) == doctest::Approx(w).epsilon(1e-12));
        CHECK(log_u.inverse(log_u.value(w)) == doctest::Approx(w).epsilon(1e-12));
        CHECK(exp_u.inverse(exp_u.value(w)) == doctest::Approx(w).epsilon(1e-12));
        CHECK(pow_u.inverse(pow_u.value(w)) == doctest::Approx(w).epsilon(1e-12));
    }

    CHECK_THROWS_AS(log_u.value(0.0), std::domain_error);
    CHECK_THROWS_AS(log_u.value(-1.0), std::domain_error);
    CHECK_THROWS_AS(pow_u.value(-0.1), std::domain_error);
    CHECK_THROWS_AS(exp_u.inverse(1.0), std::domain_error);
    CHECK_THROWS_AS(pow_u.inverse(-0.1), std::domain_error);
    CHECK_THROWS_AS(UtilitySpec::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(UtilitySpec::power(1.2), std::invalid_argument);
}

TEST_CASE("maximum acceptable premium: closed forms") {
    // risk-neutral agents pay exactly the expected loss
    const PremiumResult lin = max_acceptable_premium(UtilitySpec::linear(), 10.0, 5.0, 0.3);
    CHECK(lin.m == 0.3 * 5.0);
    CHECK(lin.expected_loss == 0.3 * 5.0);
    CHECK(lin.risk_premium == 0.0);

    // log utility, even-odds loss of half the wealth: m = w0 - sqrt(w0 (w0-l))
    const PremiumResult lg = max_acceptable_premium(UtilitySpec::logarithmic(), 10.0, 5.0, 0.5);
    CHECK(std::abs(lg.m - (10.0 - std::sqrt(50.0))) <= 1e-9);
    CHECK(lg.risk_premium == doctest::Approx(lg.m - 2.5).epsilon(1e-12));

    // degenerate probabilities short-circuit
    for (const UtilitySpec& u : {UtilitySpec::logarithmic(), UtilitySpec::exponential(0.5)}) {
        CHECK(max_acceptable_premium(u, 10.0, 4.0, 0.0).m == 0.0);
        CHECK(max_acceptable_premium(u, 10.0, 4.0, 1.0).m == 4.0);
    }

    CHECK_THROWS_AS(max_acceptable_premium(UtilitySpec::logarithmic(), 10.0, 10.0, 0.5),
                    std::domain_error);
    CHECK_THROWS_AS(max_acceptable_premium(UtilitySpec::linear(), 10.0, 4.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("closed-form premiums agree with bisection") {
    RngStream rng(606);
    int checked = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const double w0 = 5.0 + 15.0 * rng.uniform();
        const double l = (0.2 + 0.6 * rng.uniform()) * w0;
        const double p = 0.05 + 0.9 * rng.uniform();
        for (const UtilitySpec& u :
             {UtilitySpec::logarithmic(), UtilitySpec::exponential(0.05 + rng.uniform()),
              UtilitySpec::power(0.2 + 0.6 * rng.uniform())}) {
            const double closed = max_acceptable_premium(u, w0, l, p).m;
            const double iter = premium_bisection(u, w0, l, p, 1e-11);
            CHECK(std::abs(closed - iter) <= 1e-9);
            ++checked;
        }
    }
    CHECK(checked == 60);
}

TEST_CASE("premium is at least the fair price and grows with the risk") {
    RngStream rng(607);
    for (int rep = 0; rep < 50; ++rep) {
        const double w0 = 5.0 + 15.0 * rng.uniform();
        const double l = (0.2 + 0.5 * rng.uniform()) * w0;
        const double p = 0.1 + 0.8 * rng.uniform();
        for (const UtilitySpec& u :
             {UtilitySpec::logarithmic(), UtilitySpec::exponential(0.4),
              UtilitySpec::power(0.5)}) {
            const PremiumResult r = max_acceptable_premium(u, w0, l, p);
            CHECK(r.risk_premium >= 0.0);
            CHECK(max_acceptable_premium(u, w0, l, std::min(p + 0.1, 1.0)).m > r.m);
            CHECK(max_acceptable_premium(u, w0, l * 1.1, p).m > r.m);
        }
    }
}

TEST_CASE("self-protection picks the breakpoint with the best lottery") {
    // risk-neutral worked example: spending 2 cuts the loss odds 0.5 -> 0.05
    const std::vector<ProtectionStep> table{{0.0, 0.5}, {2.0, 0.05}};
    const ProtectionDecision dec =
        self_protection_decision(UtilitySpec::linear(), 10.0, 8.0, table);
    CHECK(dec.c_star == 2.0);
    CHECK(dec.f_star == doctest::Approx(7.6).epsilon(1e-12)); // vs 6.0 at no spend
    CHECK(dec.choice == ProtectChoice::SelfProtect);
    CHECK(dec.spend == 2.0);

    // log utility keeps the same structure on a gentler loss
    const ProtectionDecision lg =
        self_protection_decision(UtilitySpec::logarithmic(), 10.0, 5.0, table);
    const double f0 = 0.5 * std::log(5.0) + 0.5 * std::log(10.0);
    const double f2 = 0.05 * std::log(3.0) + 0.95 * std::log(8.0);
    CHECK(lg.f_star == doctest::Approx(std::max(f0, f2)).epsilon(1e-12));
    CHECK(lg.c_star == (f2 > f0 ? 2.0 : 0.0));
}

TEST_CASE("insurance displaces protection only when strictly cheaper") {
    const std::vector<ProtectionStep> table{{0.0, 0.5}, {2.0, 0.05}};
    const UtilitySpec u = UtilitySpec::linear();

    const ProtectionDecision cheap = self_protection_decision(u, 10.0, 8.0, table, 1.5);
    CHECK(cheap.choice == ProtectChoice::Insure);
    CHECK(cheap.spend == 1.5);

    const ProtectionDecision tie = self_protection_decision(u, 10.0, 8.0, table, 2.0);
    CHECK(tie.choice == ProtectChoice::SelfProtect);
    CHECK(tie.spend == 2.0);

    const ProtectionDecision dear = self_protection_decision(u, 10.0, 8.0, table, 2.5);
    CHECK(dear.choice == ProtectChoice::SelfProtect);
    CHECK(dear.spend == 2.0);
}

TEST_CASE("without worthwhile protection the classical premium rule applies") {
    // flat table: no spend level helps, so c* = 0 and m = 0.5 * 8 = 4
    const std::vector<ProtectionStep> flat{{0.0, 0.5}};
    const UtilitySpec u = UtilitySpec::linear();

    CHECK(self_protection_decision(u, 10.0, 8.0, flat).choice == ProtectChoice::DoNothing);

    const ProtectionDecision buy = self_protection_decision(u, 10.0, 8.0, flat, 3.9);
    CHECK(buy.choice == ProtectChoice::Insure);
    CHECK(buy.spend == 3.9);
    CHECK(self_protection_decision(u, 10.0, 8.0, flat, 4.0).choice == ProtectChoice::Insure);
    const ProtectionDecision pass = self_protection_decision(u, 10.0, 8.0, flat, 4.1);
    CHECK(pass.choice == ProtectChoice::DoNothing);
    CHECK(pass.spend == 0.0);
}

TEST_CASE("protection table validation") {
    const UtilitySpec u = UtilitySpec::linear();
    CHECK_THROWS_AS(self_protection_decision(u, 10, 8, {}), std::invalid_argument);
    CHECK_THROWS_AS(self_protection_decision(u, 10, 8, {{1.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(self_protection_decision(u, 10, 8, {{0.0, 0.5}, {2.0, 0.6}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(self_protection_decision(u, 10, 8, {{0.0, 0.5}, {0.0, 0.3}}),
                    std::invalid_argument);
    // every breakpoint pushes log wealth out of domain
    CHECK_THROWS_AS(self_protection_decision(UtilitySpec::logarithmic(), 5.0, 6.0,
                                             {{0.0, 0.5}}),
                    std::domain_error);
}

TEST_CASE("interdependent security: payoffs in the risk-neutral case") {
    IdsInstance inst;
    inst.p = 0.5;
    inst.q = 0.5;
    inst.l = 8.0;
    inst.c = 2.0;
    inst.w0 = 10.0;
    inst.u = UtilitySpec::linear();

    const IdsPayoffs pay = ids_payoffs(inst);
    const double pq = 0.25;
    CHECK(pay.ss == 8.0);
    CHECK(pay.sn == (1.0 - pq) * 8.0 + pq * 0.0);
    CHECK(pay.ns == 10.0 - 0.5 * 8.0);
    CHECK(pay.nn == 0.5 * 2.0 + 0.5 * (pq * 2.0 + (1.0 - pq) * 10.0));

    const IdsThresholds th = ids_thresholds(inst);
    CHECK(th.c1 == doctest::Approx(0.5 * 8.0).epsilon(1e-12));          // p l
    CHECK(th.c2 == doctest::Approx(0.5 * 0.75 * 8.0).epsilon(1e-12));   // p (1-pq) l
}

TEST_CASE("interdependent security: equilibria across the three cost regions") {
    IdsInstance inst;
    inst.p = 0.5;
    inst.q = 0.5;
    inst.l = 8.0;
    inst.w0 = 10.0;
    inst.u = UtilitySpec::linear(); // thresholds c2 = 3, c1 = 4

    inst.c = 2.0; // cheap protection: unique (S,S)
    IdsEquilibria eq = ids_equilibria(inst);
    CHECK(eq.ss);
    CHECK_FALSE(eq.nn);
    CHECK_FALSE(eq.sn);
    CHECK(eq.sn == eq.ns);
    CHECK(classify_by_thresholds(inst) == IdsRegion::BothProtect);

    inst.c = 3.5; // coordination band: (S,S) and (N,N) both self-consistent
    eq = ids_equilibria(inst);
    CHECK(eq.ss);
    CHECK(eq.nn);
    CHECK_FALSE(eq.sn);
    CHECK(classify_by_thresholds(inst) == IdsRegion::Ambiguous);

    inst.c = 4.5; // protection too dear: unique (N,N)
    eq = ids_equilibria(inst);
    CHECK_FALSE(eq.ss);
    CHECK(eq.nn);
    CHECK_FALSE(eq.sn);
    CHECK(classify_by_thresholds(inst) == IdsRegion::NoneProtect);

    inst.c = 4.0; // exactly at c1
    eq = ids_equilibria(inst);
    CHECK(eq.at_c1);
    CHECK_FALSE(eq.at_c2);
    inst.c = 3.0;
    CHECK(ids_equilibria(inst).at_c2);
}

TEST_CASE("threshold classification matches best-response enumeration") {
    // linear and exponential utilities: the thresholds are exact there
    // (wealth-independent risk premia), so away from the boundaries the
    // closed-form region must reproduce the enumerated equilibria
    RngStream rng(909);
    int done = 0;
    while (done < 300) {
        IdsInstance inst;
        inst.w0 = 1.0 + 19.0 * rng.uniform();
        inst.p = 0.05 + 0.85 * rng.uniform();
        inst.q = 0.05 + 0.85 * rng.uniform();
        inst.l = (0.1 + 0.6 * rng.uniform()) * inst.w0;
        inst.u = done % 2 == 0 ? UtilitySpec::linear()
                               : UtilitySpec::exponential(0.05 + 0.45 * rng.uniform());
        const IdsThresholds th = ids_thresholds(inst);
        if (!(th.c2 <= th.c1)) continue; // classification defined for c2 <= c1
        inst.c = 1.3 * th.c1 * rng.uniform();
        if (std::abs(inst.c - th.c1) <= 1e-6 * th.c1) continue; // boundary band
        if (std::abs(inst.c - th.c2) <= 1e-6 * th.c1) continue;

        const IdsEquilibria eq = ids_equilibria(inst);
        const IdsRegion region = classify_by_thresholds(inst);
        CHECK(eq.sn == eq.ns);
        switch (region) {
        case IdsRegion::BothProtect:
            CHECK(eq.ss);
            CHECK_FALSE(eq.nn);
            break;
        case IdsRegion::Ambiguous:
            CHECK(eq.ss);
            CHECK(eq.nn);
            break;
        case IdsRegion::NoneProtect:
            CHECK(eq.nn);
            CHECK_FALSE(eq.ss);
            break;
        }
        ++done;
    }
}

TEST_CASE("contagion study default instance: cheap protection wins") {
    IdsInstance inst;
    inst.p = 0.1;
    inst.q = 0.2;
    inst.l = 4.0;
    inst.c = 0.3;
    inst.w0 = 10.0;
    inst.u = UtilitySpec::logarithmic();
    CHECK(classify_by_thresholds(inst) == IdsRegion::BothProtect);
    const IdsEquilibria eq = ids_equilibria(inst);
    CHECK(eq.ss);
    CHECK_FALSE(eq.nn);
    CHECK_FALSE(eq.sn);
}

TEST_CASE("instance validation") {
    IdsInstance inst;
    inst.p = 1.5;
    CHECK_THROWS_AS(ids_payoffs(inst), std::invalid_argument);
    inst.p = 0.5;
    inst.c = -1.0;
    CHECK_THROWS_AS(ids_thresholds(inst), std::invalid_argument);
}
