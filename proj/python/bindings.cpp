#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "v2g/baselines.hpp"
#include "v2g/exact.hpp"
#include "v2g/harness.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

v2g::harness::ExperimentConfig config_of(const std::string& config_json) {
    return v2g::harness::config_from_json(json::parse(config_json));
}

v2g::PolicyParams theta_or_zero(const v2g::harness::ExperimentConfig& cfg,
                                const std::string& theta_json) {
    if (theta_json.empty()) return v2g::PolicyParams(cfg.env.B, cfg.env.P);
    return v2g::PolicyParams::from_json(theta_json);
}

py::dict report_dict(const v2g::EvalReport& r) {
    py::dict d;
    d["avg_total_cost"] = r.avg_total_cost;
    d["avg_charging_cost"] = r.avg_charging_cost;
    d["avg_discharging_profit"] = r.avg_discharging_profit;
    d["avg_insurance_cost"] = r.avg_insurance_cost;
    d["avg_penalty_cost"] = r.avg_penalty_cost;
    d["insurance_buy_rate"] = r.insurance_buy_rate;
    d["coverage_rate"] = r.coverage_rate;
    d["se_total_cost"] = r.se_total_cost;
    d["horizon"] = r.horizon;
    d["replications"] = r.replications;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "V2G charging/discharging insurance toolkit";

    m.def("default_config", [] {
        return v2g::harness::config_to_json(v2g::harness::default_experiment()).dump(2);
    });

    m.def("config_hash", [](const std::string& config_json) {
        return v2g::harness::identity_comment(config_of(config_json));
    });

    m.def(
        "train",
        [](const std::string& config_json) {
            const auto cfg = config_of(config_json);
            const v2g::TrainResult res = v2g::train(cfg.env, cfg.learner, cfg.seed);
            py::dict d;
            d["mean_cost"] = res.mean_cost;
            d["psi_tilde"] = res.learner.psi_tilde;
            d["s_star_visits"] = res.s_star_visits;
            d["theta_json"] = res.learner.theta.to_json();
            return d;
        },
        py::arg("config_json"));

    m.def(
        "evaluate",
        [](const std::string& config_json, const std::string& policy,
           const std::string& theta_json) {
            const auto cfg = config_of(config_json);
            v2g::PolicyFn fn;
            if (policy == "learned")
                fn = v2g::make_softmax_policy(theta_or_zero(cfg, theta_json));
            else if (policy == "always_insured")
                fn = v2g::make_ip_policy(cfg.env.B, cfg.env.cost.coverage_len);
            else if (policy == "never_insured")
                fn = v2g::make_wp_policy(cfg.env.B);
            else
                throw std::invalid_argument(
                    "policy must be learned, always_insured, or never_insured");
            const v2g::EvalReport r =
                v2g::evaluate_policy(cfg.env, fn, cfg.learner.recurrent.s_star,
                                     cfg.eval.horizon, cfg.eval.replications, cfg.seed);
            return report_dict(r);
        },
        py::arg("config_json"), py::arg("policy"), py::arg("theta_json") = std::string());

    m.def(
        "exact_average_cost",
        [](const std::string& config_json, const std::string& theta_json) {
            const auto cfg = config_of(config_json);
            const v2g::exact::AnalysisSpace space(cfg.env);
            const auto mu = v2g::exact::policy_mu(space, theta_or_zero(cfg, theta_json));
            return v2g::exact::analyze(space, mu, cfg.learner.recurrent.s_star).C;
        },
        py::arg("config_json"), py::arg("theta_json") = std::string());

    m.def(
        "exact_gradient",
        [](const std::string& config_json, const std::string& theta_json) {
            const auto cfg = config_of(config_json);
            const v2g::exact::AnalysisSpace space(cfg.env);
            const auto res = v2g::exact::gradient_exact(
                space, theta_or_zero(cfg, theta_json), cfg.learner.recurrent.s_star);
            py::dict d;
            d["grad"] = res.grad;
            d["average_cost"] = res.analysis.C;
            return d;
        },
        py::arg("config_json"), py::arg("theta_json") = std::string());

    m.def("run_train_csv", [](const std::string& config_json) {
        const auto out = v2g::harness::run_train(config_of(config_json));
        py::dict d;
        d["trajectories_csv"] = out.trajectories_csv;
        d["policy_csv"] = out.policy_csv;
        d["theta_json"] = out.theta_json;
        d["learned_final"] = out.learned_final;
        d["insured_final"] = out.insured_final;
        d["uninsured_final"] = out.uninsured_final;
        return d;
    });

    m.def("run_sweep_csv", [](const std::string& config_json) {
        return v2g::harness::run_sweep(config_of(config_json));
    });

    m.def("run_voi_csv", [](const std::string& config_json) {
        return v2g::harness::run_voi(config_of(config_json));
    });

    m.def(
        "run_econ_csv",
        [](const std::string& config_json, const std::string& which) {
            using v2g::harness::EconCommand;
            EconCommand cmd;
            if (which == "premium")
                cmd = EconCommand::Premium;
            else if (which == "protect")
                cmd = EconCommand::Protect;
            else if (which == "ids")
                cmd = EconCommand::Ids;
            else
                throw std::invalid_argument("which must be premium, protect, or ids");
            return v2g::harness::run_econ(config_of(config_json), cmd);
        },
        py::arg("config_json"), py::arg("which"));

    m.def("run_verify", [](const std::string& config_json) {
        const auto res = v2g::harness::run_verify(config_of(config_json));
        py::dict d;
        d["pass"] = res.pass;
        d["report"] = res.report;
        return d;
    });

    m.def(
        "max_acceptable_premium",
        [](const std::string& kind, double w0, double l, double p, double a, double gamma) {
            v2g::econ::UtilitySpec u;
            if (kind == "linear")
                u = v2g::econ::UtilitySpec::linear();
            else if (kind == "log")
                u = v2g::econ::UtilitySpec::logarithmic();
            else if (kind == "exponential")
                u = v2g::econ::UtilitySpec::exponential(a);
            else if (kind == "power")
                u = v2g::econ::UtilitySpec::power(gamma);
            else
                throw std::invalid_argument("kind must be linear, log, exponential, or power");
            const auto res = v2g::econ::max_acceptable_premium(u, w0, l, p);
            py::dict d;
            d["m"] = res.m;
            d["expected_loss"] = res.expected_loss;
            d["risk_premium"] = res.risk_premium;
            return d;
        },
        py::arg("kind"), py::arg("w0"), py::arg("l"), py::arg("p"), py::arg("a") = 1.0,
        py::arg("gamma") = 0.5);
}
