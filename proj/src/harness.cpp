#include "v2g/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "v2g/baselines.hpp"
#include "v2g/csv.hpp"
#include "v2g/exact.hpp"

namespace v2g::harness {

Topology load_topology_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open topology: " + path);
    Topology topo;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        double x, y, price;
        char trailing;
        const int got = std::sscanf(line.c_str(), " %lf , %lf , %lf %c", &x, &y, &price, &trailing);
        if (got != 3) {
            const bool looks_like_header = std::any_of(
                line.begin(), line.end(), [](unsigned char ch) { return std::isalpha(ch); });
            if (lineno == 1 && looks_like_header) continue;
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 3 comma-separated numeric fields (x,y,price)");
        }
        topo.stations.push_back({x, y, price});
    }
    if (topo.stations.empty())
        throw std::invalid_argument(path + ": no stations found");
    return topo;
}

namespace {

const char* a1_name(A1 a) {
    switch (a) {
    case A1::Idle: return "idle";
    case A1::Charge: return "charge";
    case A1::Discharge: return "discharge";
    }
    return "?";
}

const char* a2_name(A2 a) { return a == A2::Buy ? "buy" : "no_buy"; }

std::vector<double> baseline_trace(const EnvConfig& env, const PolicyFn& policy,
                                   const PevState& start, long horizon, std::uint64_t seed) {
    RngStream env_rng(mix_seed(seed, 1));
    RngStream pol_rng(mix_seed(seed, 2));
    FullEnvState s = start_state(env, start, env_rng);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(horizon));
    double sum = 0.0;
    for (long t = 1; t <= horizon; ++t) {
        const ActionPair a = policy(s.pev, t, pol_rng);
        const StepOutcome out = env_step(env, s, a, env_rng);
        sum += out.cost;
        trace.push_back(sum / static_cast<double>(t));
        s = out.next;
    }
    return trace;
}

} // namespace

TrainOutputs run_train(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    const TrainResult la = train(cfg.env, cfg.learner, cfg.seed);
    const PevState start = cfg.learner.recurrent.s_star;
    const long n = cfg.learner.iterations;
    const auto insured = baseline_trace(
        cfg.env, make_ip_policy(cfg.env.B, cfg.env.cost.coverage_len), start, n, cfg.seed);
    const auto uninsured =
        baseline_trace(cfg.env, make_wp_policy(cfg.env.B), start, n, cfg.seed);

    CsvBuilder traj;
    traj.comment(identity_comment(cfg));
    traj.header({"policy", "iteration", "psi_tilde", "cumulative_mean_cost"});
    for (long t = 0; t < n; ++t)
        traj.row({"learned", std::to_string(t + 1), csv_num(la.psi_trace[t]),
                  csv_num(la.cum_mean_cost[t])});
    for (long t = 0; t < n; ++t)
        traj.row({"always_insured", std::to_string(t + 1), "", csv_num(insured[t])});
    for (long t = 0; t < n; ++t)
        traj.row({"never_insured", std::to_string(t + 1), "", csv_num(uninsured[t])});

    CsvBuilder pol;
    pol.comment(identity_comment(cfg));
    pol.header({"b", "p", "i", "a1", "a2", "probability"});
    for (int b = 1; b <= cfg.env.B; ++b)
        for (int p = 1; p <= cfg.env.P; ++p)
            for (int i = 0; i <= 1; ++i) {
                const PevState s{b, p, i};
                const auto acts = valid_actions(s, cfg.env.B);
                const auto probs = action_probabilities(la.learner.theta, s);
                for (std::size_t j = 0; j < acts.size(); ++j)
                    pol.row({std::to_string(b), std::to_string(p), std::to_string(i),
                             a1_name(acts[j].a1), a2_name(acts[j].a2), csv_num(probs[j])});
            }

    TrainOutputs out;
    out.trajectories_csv = traj.text();
    out.policy_csv = pol.text();
    out.theta_json = la.learner.theta.to_json();
    out.learned_final = la.cum_mean_cost.empty() ? 0.0 : la.cum_mean_cost.back();
    out.insured_final = insured.empty() ? 0.0 : insured.back();
    out.uninsured_final = uninsured.empty() ? 0.0 : uninsured.back();
    return out;
}

namespace {

EnvConfig env_with_axis_value(const EnvConfig& base, SweepAxis axis, double v) {
    EnvConfig env = base;
    switch (axis) {
    case SweepAxis::ConsumptionRate:
        env.cost.consumption_rate = v;
        break;
    case SweepAxis::UnavailProb:
        env.risk.unavail_prob.assign(static_cast<std::size_t>(env.P), v);
        break;
    case SweepAxis::Premium:
        env.cost.premium = v;
        break;
    }
    return env;
}

} // namespace

std::string run_sweep(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    struct ValueResult {
        EvalReport learned, insured, uninsured;
    };
    // every axis value reuses the same seed, so all points share one set of
    // environment draws (common random numbers)
    auto run_value = [&cfg](double v) {
        const EnvConfig env = env_with_axis_value(cfg.env, cfg.sweep.axis, v);
        validate(env);
        const TrainResult la = train(env, cfg.learner, cfg.seed);
        const PevState start = cfg.learner.recurrent.s_star;
        ValueResult r;
        r.learned = evaluate_policy(env, make_softmax_policy(la.learner.theta), start,
                                    cfg.eval.horizon, cfg.eval.replications, cfg.seed);
        r.insured = evaluate_policy(env, make_ip_policy(env.B, env.cost.coverage_len), start,
                                    cfg.eval.horizon, cfg.eval.replications, cfg.seed);
        r.uninsured = evaluate_policy(env, make_wp_policy(env.B), start, cfg.eval.horizon,
                                      cfg.eval.replications, cfg.seed);
        return r;
    };

    std::vector<std::future<ValueResult>> futures;
    futures.reserve(cfg.sweep.values.size());
    for (double v : cfg.sweep.values)
        futures.push_back(std::async(std::launch::async, run_value, v));

    CsvBuilder csv;
    csv.comment(identity_comment(cfg));
    csv.header({"axis", "value", "policy", "avg_total_cost", "avg_charging_cost",
                "avg_discharging_profit", "avg_insurance_cost", "avg_penalty_cost",
                "insurance_buy_rate", "coverage_rate", "se_total_cost", "se_charging_cost",
                "se_discharging_profit", "se_insurance_cost", "se_penalty_cost", "se_buy_rate"});
    const std::string axis = to_string(cfg.sweep.axis);
    auto emit = [&](double v, const std::string& policy, const EvalReport& r) {
        csv.row({axis, csv_num(v), policy, csv_num(r.avg_total_cost),
                 csv_num(r.avg_charging_cost), csv_num(r.avg_discharging_profit),
                 csv_num(r.avg_insurance_cost), csv_num(r.avg_penalty_cost),
                 csv_num(r.insurance_buy_rate), csv_num(r.coverage_rate),
                 csv_num(r.se_total_cost), csv_num(r.se_charging_cost),
                 csv_num(r.se_discharging_profit), csv_num(r.se_insurance_cost),
                 csv_num(r.se_penalty_cost), csv_num(r.se_buy_rate)});
    };
    for (std::size_t j = 0; j < cfg.sweep.values.size(); ++j) {
        const ValueResult r = futures[j].get();
        const double v = cfg.sweep.values[j];
        emit(v, "learned", r.learned);
        emit(v, "always_insured", r.insured);
        emit(v, "never_insured", r.uninsured);
    }
    return csv.text();
}

std::string run_voi(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    const Topology topo =
        cfg.voi.topology_csv.empty()
            ? random_topology(cfg.voi.stations, cfg.voi.width, cfg.voi.height,
                              cfg.voi.price_levels, cfg.voi.layout_seed)
            : load_topology_csv(cfg.voi.topology_csv);

    CsvBuilder csv;
    csv.comment(identity_comment(cfg));
    csv.header({"scenario", "stations", "uninformed", "informed", "voi", "se_uninformed",
                "se_informed", "se_voi"});
    for (ScenarioKind kind : {ScenarioKind::Charge, ScenarioKind::Discharge}) {
        const VoiResult res = monte_carlo_voi(topo, cfg.voi.vehicle, kind, cfg.voi.counts,
                                              cfg.voi.trials, cfg.seed);
        const std::string name = kind == ScenarioKind::Charge ? "charge" : "discharge";
        for (const VoiRow& row : res.rows)
            csv.row({name, std::to_string(row.stations), csv_num(row.uninformed),
                     csv_num(row.informed), csv_num(row.voi), csv_num(row.se_uninformed),
                     csv_num(row.se_informed), csv_num(row.se_voi)});
    }
    return csv.text();
}

namespace {

std::string utility_name(const econ::UtilitySpec& u) {
    switch (u.kind) {
    case econ::UtilityKind::Linear: return "linear";
    case econ::UtilityKind::Log: return "log";
    case econ::UtilityKind::Exponential: return "exponential";
    case econ::UtilityKind::Power: return "power";
    }
    return "?";
}

} // namespace

std::string run_econ(const ExperimentConfig& cfg, EconCommand which) {
    validate_experiment(cfg);
    const EconSpec& ec = cfg.econ;
    CsvBuilder csv;
    csv.comment(identity_comment(cfg));
    switch (which) {
    case EconCommand::Premium: {
        const econ::PremiumResult res =
            econ::max_acceptable_premium(ec.utility, ec.w0, ec.l, ec.p);
        csv.header({"utility", "a", "gamma", "w0", "l", "p", "m", "expected_loss",
                    "risk_premium"});
        csv.row({utility_name(ec.utility), csv_num(ec.utility.a), csv_num(ec.utility.gamma),
                 csv_num(ec.w0), csv_num(ec.l), csv_num(ec.p), csv_num(res.m),
                 csv_num(res.expected_loss), csv_num(res.risk_premium)});
        break;
    }
    case EconCommand::Protect: {
        const econ::ProtectionDecision dec = econ::self_protection_decision(
            ec.utility, ec.w0, ec.l, ec.protection, ec.insurance_price);
        const char* choice = dec.choice == econ::ProtectChoice::Insure ? "insure"
                             : dec.choice == econ::ProtectChoice::SelfProtect
                                 ? "self_protect"
                                 : "do_nothing";
        csv.header({"utility", "w0", "l", "insurance_price", "c_star", "f_star", "choice",
                    "spend"});
        csv.row({utility_name(ec.utility), csv_num(ec.w0), csv_num(ec.l),
                 ec.insurance_price ? csv_num(*ec.insurance_price) : "",
                 csv_num(dec.c_star), csv_num(dec.f_star), choice, csv_num(dec.spend)});
        break;
    }
    case EconCommand::Ids: {
        const econ::IdsInstance inst{ec.ids_p, ec.ids_q, ec.ids_l, ec.ids_c, ec.w0,
                                     ec.utility};
        const econ::IdsPayoffs pay = econ::ids_payoffs(inst);
        const econ::IdsThresholds th = econ::ids_thresholds(inst);
        const econ::IdsEquilibria eq = econ::ids_equilibria(inst);
        const econ::IdsRegion region = econ::classify_by_thresholds(inst);
        const char* region_name = region == econ::IdsRegion::BothProtect ? "both_protect"
                                  : region == econ::IdsRegion::Ambiguous ? "ambiguous"
                                                                         : "none_protect";
        csv.header({"p", "q", "l", "c", "w0", "utility", "ss", "sn", "ns", "nn", "c1", "c2",
                    "eq_ss", "eq_sn", "eq_ns", "eq_nn", "region", "at_boundary"});
        csv.row({csv_num(inst.p), csv_num(inst.q), csv_num(inst.l), csv_num(inst.c),
                 csv_num(inst.w0), utility_name(inst.u), csv_num(pay.ss), csv_num(pay.sn),
                 csv_num(pay.ns), csv_num(pay.nn), csv_num(th.c1), csv_num(th.c2),
                 eq.ss ? "1" : "0", eq.sn ? "1" : "0", eq.ns ? "1" : "0", eq.nn ? "1" : "0",
                 region_name, (eq.at_c1 || eq.at_c2) ? "1" : "0"});
        break;
    }
    }
    return csv.text();
}

namespace {

PolicyParams wavy_theta(int B, int P) {
    PolicyParams th(B, P);
    for (int b = 1; b <= B; ++b)
        for (int p = 1; p <= P; ++p)
            for (int i = 0; i <= 1; ++i) {
                const PevState s{b, p, i};
                const auto acts = valid_actions(s, B);
                for (std::size_t j = 0; j < acts.size(); ++j)
                    th.at(s, static_cast<int>(j)) =
                        0.7 * std::sin(b + 2 * p + 3 * i + 5 * static_cast<int>(acts[j].a1) +
                                       7 * static_cast<int>(acts[j].a2));
            }
    return th;
}

} // namespace

VerifyResult run_verify(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    const exact::AnalysisSpace space(cfg.env);
    const PevState s_star = cfg.learner.recurrent.s_star;

    VerifyResult result;
    result.pass = true;
    auto check = [&result](const std::string& name, double err, double tol) {
        char line[192];
        const bool ok = err <= tol;
        std::snprintf(line, sizeof line, "%-55s max abs error %.3e  (tol %.0e)  %s\n",
                      name.c_str(), err, tol, ok ? "ok" : "FAILED");
        result.report += line;
        if (!ok) result.pass = false;
    };

    auto avg_cost_at = [&](const PolicyParams& th) {
        return exact::analyze(space, exact::policy_mu(space, th), s_star).C;
    };

    const std::pair<std::string, PolicyParams> cases[] = {
        {"uniform", PolicyParams(cfg.env.B, cfg.env.P)},
        {"wavy", wavy_theta(cfg.env.B, cfg.env.P)},
    };
    for (const auto& [label, theta] : cases) {
        const exact::GradientResult g = exact::gradient_exact(space, theta, s_star);
        const std::vector<double> gd = exact::gradient_direct(space, theta, s_star);

        double err_direct = 0.0;
        for (std::size_t k = 0; k < g.grad.size(); ++k)
            err_direct = std::max(err_direct, std::abs(g.grad[k] - gd[k]));
        check("gradient score form vs direct form (" + label + ")", err_direct, 1e-10);

        const double h = 1e-6;
        double err_fd = 0.0;
        PolicyParams probe = theta;
        for (std::size_t k = 0; k < g.grad.size(); ++k) {
            const double saved = probe.raw()[k];
            probe.raw()[k] = saved + h;
            const double up = avg_cost_at(probe);
            probe.raw()[k] = saved - h;
            const double dn = avg_cost_at(probe);
            probe.raw()[k] = saved;
            err_fd = std::max(err_fd, std::abs(g.grad[k] - (up - dn) / (2 * h)));
        }
        check("gradient vs central finite differences (" + label + ")", err_fd, 1e-6);
    }
    result.report += result.pass ? "verify: PASS\n" : "verify: FAIL\n";
    return result;
}

namespace {

std::string with_suffix(const std::string& out_path, const std::string& suffix) {
    const auto dot = out_path.rfind('.');
    const auto slash = out_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + suffix;
    return out_path.substr(0, dot) + suffix;
}

} // namespace

void cmd_train(const ExperimentConfig& cfg, const std::string& out_path) {
    const TrainOutputs out = run_train(cfg);
    write_text_file(out_path, out.trajectories_csv);
    write_text_file(with_suffix(out_path, "_policy.csv"), out.policy_csv);
    write_text_file(with_suffix(out_path, "_theta.json"), out.theta_json);
}

void cmd_sweep(const ExperimentConfig& cfg, const std::string& out_path) {
    write_text_file(out_path, run_sweep(cfg));
}

void cmd_voi(const ExperimentConfig& cfg, const std::string& out_path) {
    write_text_file(out_path, run_voi(cfg));
}

void cmd_econ(const ExperimentConfig& cfg, EconCommand which, const std::string& out_path) {
    const std::string text = run_econ(cfg, which);
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

int cmd_verify(const ExperimentConfig& cfg) {
    const VerifyResult res = run_verify(cfg);
    std::cout << res.report;
    return res.pass ? 0 : 1;
}

} // namespace v2g::harness
