#include "v2g/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace v2g::harness {

using nlohmann::json;

std::string to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::ConsumptionRate: return "consumption_rate";
    case SweepAxis::UnavailProb: return "unavail_prob";
    case SweepAxis::Premium: return "premium";
    }
    throw std::logic_error("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "consumption_rate") return SweepAxis::ConsumptionRate;
    if (name == "unavail_prob") return SweepAxis::UnavailProb;
    if (name == "premium") return SweepAxis::Premium;
    throw std::invalid_argument(
        "config field 'sweep.axis': expected one of consumption_rate, unavail_prob, "
        "premium; got '" + name + "'");
}

ExperimentConfig default_experiment() {
    ExperimentConfig cfg;
    cfg.env = default_env();
    return cfg;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

// strict typed getters; `at` is the dotted path for diagnostics

double get_num(const json& j, const std::string& at) {
    if (!j.is_number()) fail(at, "expected a number");
    return j.get<double>();
}

long get_int(const json& j, const std::string& at) {
    if (!j.is_number_integer()) fail(at, "expected an integer");
    return j.get<long>();
}

std::string get_str(const json& j, const std::string& at) {
    if (!j.is_string()) fail(at, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& at) {
    if (!j.is_array() || j.empty()) fail(at, "expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) fail(at, "expected a non-empty array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& j, const std::string& at) {
    if (!j.is_array() || j.empty()) fail(at, "expected a non-empty array of integers");
    std::vector<int> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number_integer()) fail(at, "expected a non-empty array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

// Walks an object with a fixed set of handlers; unknown keys are errors.
struct ObjectReader {
    const json& j;
    std::string path;

    void read(const std::vector<std::pair<std::string,
                                          std::function<void(const json&, const std::string&)>>>&
                  handlers) const {
        if (!j.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : j.items()) {
            const std::string at = path.empty() ? key : path + "." + key;
            bool known = false;
            for (const auto& [name, fn] : handlers) {
                if (name == key) {
                    fn(value, at);
                    known = true;
                    break;
                }
            }
            if (!known) fail(at, "unknown field");
        }
    }
};

void apply_env(const json& j, EnvConfig& env) {
    ObjectReader{j, "env"}.read({
        {"B", [&](const json& v, const std::string& at) { env.B = static_cast<int>(get_int(v, at)); }},
        {"P", [&](const json& v, const std::string& at) { env.P = static_cast<int>(get_int(v, at)); }},
        {"premium", [&](const json& v, const std::string& at) { env.cost.premium = get_num(v, at); }},
        {"coverage_len",
         [&](const json& v, const std::string& at) {
             env.cost.coverage_len = static_cast<int>(get_int(v, at));
         }},
        {"h1", [&](const json& v, const std::string& at) { env.cost.h1 = get_num(v, at); }},
        {"h2", [&](const json& v, const std::string& at) { env.cost.h2 = get_num(v, at); }},
        {"consumption_rate",
         [&](const json& v, const std::string& at) { env.cost.consumption_rate = get_num(v, at); }},
        {"unavail_prob",
         [&](const json& v, const std::string& at) { env.risk.unavail_prob = get_num_list(v, at); }},
        {"charge_avail",
         [&](const json& v, const std::string& at) { env.prices.charge_avail = get_num_list(v, at); }},
        {"charge_unavail",
         [&](const json& v, const std::string& at) { env.prices.charge_unavail = get_num_list(v, at); }},
        {"discharge_avail",
         [&](const json& v, const std::string& at) { env.prices.discharge_avail = get_num_list(v, at); }},
        {"discharge_unavail",
         [&](const json& v, const std::string& at) {
             env.prices.discharge_unavail = get_num_list(v, at);
         }},
    });
}

void apply_learner(const json& j, LearnerConfig& lc) {
    ObjectReader{j, "learner"}.read({
        {"kappa", [&](const json& v, const std::string& at) { lc.kappa = get_num(v, at); }},
        {"step_a", [&](const json& v, const std::string& at) { lc.schedule.a = get_num(v, at); }},
        {"step_b", [&](const json& v, const std::string& at) { lc.schedule.b = get_num(v, at); }},
        {"iterations",
         [&](const json& v, const std::string& at) { lc.iterations = get_int(v, at); }},
        {"s_star",
         [&](const json& v, const std::string& at) {
             const auto xs = get_int_list(v, at);
             if (xs.size() != 3) fail(at, "expected [b, p, i]");
             lc.recurrent.s_star = {xs[0], xs[1], xs[2]};
         }},
    });
}

void apply_eval(const json& j, EvalSpec& ev) {
    ObjectReader{j, "eval"}.read({
        {"horizon", [&](const json& v, const std::string& at) { ev.horizon = get_int(v, at); }},
        {"replications",
         [&](const json& v, const std::string& at) {
             ev.replications = static_cast<int>(get_int(v, at));
         }},
    });
}

void apply_sweep(const json& j, SweepSpec& sw) {
    ObjectReader{j, "sweep"}.read({
        {"axis",
         [&](const json& v, const std::string& at) {
             sw.axis = sweep_axis_from_string(get_str(v, at));
         }},
        {"values", [&](const json& v, const std::string& at) { sw.values = get_num_list(v, at); }},
    });
}

void apply_voi(const json& j, VoiSpec& voi) {
    ObjectReader{j, "voi"}.read({
        {"stations",
         [&](const json& v, const std::string& at) { voi.stations = static_cast<int>(get_int(v, at)); }},
        {"counts", [&](const json& v, const std::string& at) { voi.counts = get_int_list(v, at); }},
        {"trials", [&](const json& v, const std::string& at) { voi.trials = get_int(v, at); }},
        {"price_levels",
         [&](const json& v, const std::string& at) { voi.price_levels = get_num_list(v, at); }},
        {"width", [&](const json& v, const std::string& at) { voi.width = get_num(v, at); }},
        {"height", [&](const json& v, const std::string& at) { voi.height = get_num(v, at); }},
        {"battery_kwh",
         [&](const json& v, const std::string& at) { voi.vehicle.battery_kwh = get_num(v, at); }},
        {"kwh_per_km",
         [&](const json& v, const std::string& at) { voi.vehicle.kwh_per_km = get_num(v, at); }},
        {"topology_csv",
         [&](const json& v, const std::string& at) { voi.topology_csv = get_str(v, at); }},
        {"layout_seed",
         [&](const json& v, const std::string& at) {
             voi.layout_seed = static_cast<std::uint64_t>(get_int(v, at));
         }},
    });
}

econ::UtilitySpec utility_from_json(const json& j, const std::string& path) {
    econ::UtilitySpec base; // carries defaults for unset parameters
    std::string kind = "linear";
    double a = base.a, gamma = base.gamma;
    ObjectReader{j, path}.read({
        {"kind", [&](const json& v, const std::string& at) { kind = get_str(v, at); }},
        {"a", [&](const json& v, const std::string& at) { a = get_num(v, at); }},
        {"gamma", [&](const json& v, const std::string& at) { gamma = get_num(v, at); }},
    });
    if (kind == "linear") return econ::UtilitySpec::linear();
    if (kind == "log") return econ::UtilitySpec::logarithmic();
    if (kind == "exponential") return econ::UtilitySpec::exponential(a);
    if (kind == "power") return econ::UtilitySpec::power(gamma);
    fail(path + ".kind", "expected one of linear, log, exponential, power; got '" + kind + "'");
}

json utility_to_json(const econ::UtilitySpec& u) {
    json j;
    switch (u.kind) {
    case econ::UtilityKind::Linear: j["kind"] = "linear"; break;
    case econ::UtilityKind::Log: j["kind"] = "log"; break;
    case econ::UtilityKind::Exponential: j["kind"] = "exponential"; break;
    case econ::UtilityKind::Power: j["kind"] = "power"; break;
    }
    j["a"] = u.a;
    j["gamma"] = u.gamma;
    return j;
}

void apply_econ(const json& j, EconSpec& ec) {
    ObjectReader{j, "econ"}.read({
        {"utility",
         [&](const json& v, const std::string& at) { ec.utility = utility_from_json(v, at); }},
        {"w0", [&](const json& v, const std::string& at) { ec.w0 = get_num(v, at); }},
        {"l", [&](const json& v, const std::string& at) { ec.l = get_num(v, at); }},
        {"p", [&](const json& v, const std::string& at) { ec.p = get_num(v, at); }},
        {"protection",
         [&](const json& v, const std::string& at) {
             if (!v.is_array() || v.empty()) fail(at, "expected a non-empty array of steps");
             ec.protection.clear();
             for (std::size_t i = 0; i < v.size(); ++i) {
                 const std::string step_at = at + "[" + std::to_string(i) + "]";
                 econ::ProtectionStep step;
                 ObjectReader{v[i], step_at}.read({
                     {"cost",
                      [&](const json& e, const std::string& a2) { step.cost = get_num(e, a2); }},
                     {"prob",
                      [&](const json& e, const std::string& a2) { step.prob = get_num(e, a2); }},
                 });
                 ec.protection.push_back(step);
             }
         }},
        {"insurance_price",
         [&](const json& v, const std::string& at) {
             if (v.is_null())
                 ec.insurance_price.reset();
             else
                 ec.insurance_price = get_num(v, at);
         }},
        {"ids_p", [&](const json& v, const std::string& at) { ec.ids_p = get_num(v, at); }},
        {"ids_q", [&](const json& v, const std::string& at) { ec.ids_q = get_num(v, at); }},
        {"ids_l", [&](const json& v, const std::string& at) { ec.ids_l = get_num(v, at); }},
        {"ids_c", [&](const json& v, const std::string& at) { ec.ids_c = get_num(v, at); }},
    });
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg = default_experiment();
    ObjectReader{j, ""}.read({
        {"env", [&](const json& v, const std::string&) { apply_env(v, cfg.env); }},
        {"learner", [&](const json& v, const std::string&) { apply_learner(v, cfg.learner); }},
        {"eval", [&](const json& v, const std::string&) { apply_eval(v, cfg.eval); }},
        {"sweep", [&](const json& v, const std::string&) { apply_sweep(v, cfg.sweep); }},
        {"voi", [&](const json& v, const std::string&) { apply_voi(v, cfg.voi); }},
        {"econ", [&](const json& v, const std::string&) { apply_econ(v, cfg.econ); }},
        {"seed",
         [&](const json& v, const std::string& at) {
             if (!v.is_number_integer()) fail(at, "expected an integer");
             cfg.seed = v.get<std::uint64_t>();
         }},
    });
    validate_experiment(cfg);
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["env"] = {
        {"B", cfg.env.B},
        {"P", cfg.env.P},
        {"premium", cfg.env.cost.premium},
        {"coverage_len", cfg.env.cost.coverage_len},
        {"h1", cfg.env.cost.h1},
        {"h2", cfg.env.cost.h2},
        {"consumption_rate", cfg.env.cost.consumption_rate},
        {"unavail_prob", cfg.env.risk.unavail_prob},
        {"charge_avail", cfg.env.prices.charge_avail},
        {"charge_unavail", cfg.env.prices.charge_unavail},
        {"discharge_avail", cfg.env.prices.discharge_avail},
        {"discharge_unavail", cfg.env.prices.discharge_unavail},
    };
    const auto& st = cfg.learner.recurrent.s_star;
    j["learner"] = {
        {"kappa", cfg.learner.kappa},
        {"step_a", cfg.learner.schedule.a},
        {"step_b", cfg.learner.schedule.b},
        {"iterations", cfg.learner.iterations},
        {"s_star", {st.b, st.p, st.i}},
    };
    j["eval"] = {{"horizon", cfg.eval.horizon}, {"replications", cfg.eval.replications}};
    j["sweep"] = {{"axis", to_string(cfg.sweep.axis)}, {"values", cfg.sweep.values}};
    j["voi"] = {
        {"stations", cfg.voi.stations},
        {"counts", cfg.voi.counts},
        {"trials", cfg.voi.trials},
        {"price_levels", cfg.voi.price_levels},
        {"width", cfg.voi.width},
        {"height", cfg.voi.height},
        {"battery_kwh", cfg.voi.vehicle.battery_kwh},
        {"kwh_per_km", cfg.voi.vehicle.kwh_per_km},
        {"topology_csv", cfg.voi.topology_csv},
        {"layout_seed", cfg.voi.layout_seed},
    };
    json protection = json::array();
    for (const auto& s : cfg.econ.protection)
        protection.push_back({{"cost", s.cost}, {"prob", s.prob}});
    j["econ"] = {
        {"utility", utility_to_json(cfg.econ.utility)},
        {"w0", cfg.econ.w0},
        {"l", cfg.econ.l},
        {"p", cfg.econ.p},
        {"protection", protection},
        {"insurance_price",
         cfg.econ.insurance_price ? json(*cfg.econ.insurance_price) : json(nullptr)},
        {"ids_p", cfg.econ.ids_p},
        {"ids_q", cfg.econ.ids_q},
        {"ids_l", cfg.econ.ids_l},
        {"ids_c", cfg.econ.ids_c},
    };
    j["seed"] = cfg.seed;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_experiment(const ExperimentConfig& cfg) {
    validate(cfg.env);
    if (!(cfg.learner.kappa > 0)) fail("learner.kappa", "must be > 0");
    if (!(cfg.learner.schedule.a > 0)) fail("learner.step_a", "must be > 0");
    if (!(cfg.learner.schedule.b > 0)) fail("learner.step_b", "must be > 0");
    if (cfg.learner.iterations < 0) fail("learner.iterations", "must be >= 0");
    const auto& st = cfg.learner.recurrent.s_star;
    if (st.b < 1 || st.b > cfg.env.B) fail("learner.s_star", "b out of range");
    if (st.p < 1 || st.p > cfg.env.P) fail("learner.s_star", "p out of range");
    if (st.i != 0 && st.i != 1) fail("learner.s_star", "i must be 0 or 1");
    if (cfg.eval.horizon <= 0) fail("eval.horizon", "must be > 0");
    if (cfg.eval.replications <= 0) fail("eval.replications", "must be > 0");
    if (cfg.sweep.values.empty()) fail("sweep.values", "must be non-empty");
    for (double v : cfg.sweep.values) {
        switch (cfg.sweep.axis) {
        case SweepAxis::ConsumptionRate:
        case SweepAxis::UnavailProb:
            if (!(v >= 0 && v <= 1)) fail("sweep.values", "entries must be probabilities");
            break;
        case SweepAxis::Premium:
            if (!(v >= 0)) fail("sweep.values", "entries must be nonnegative");
            break;
        }
    }
    if (cfg.voi.stations <= 0) fail("voi.stations", "must be > 0");
    if (cfg.voi.counts.empty()) fail("voi.counts", "must be non-empty");
    for (int k : cfg.voi.counts)
        if (k <= 0) fail("voi.counts", "entries must be > 0");
    if (cfg.voi.trials <= 0) fail("voi.trials", "must be > 0");
    if (cfg.voi.price_levels.empty()) fail("voi.price_levels", "must be non-empty");
    if (!(cfg.voi.width > 0) || !(cfg.voi.height > 0))
        fail("voi.width", "area dimensions must be > 0");
    if (!(cfg.voi.vehicle.battery_kwh > 0)) fail("voi.battery_kwh", "must be > 0");
    if (!(cfg.voi.vehicle.kwh_per_km >= 0)) fail("voi.kwh_per_km", "must be >= 0");
    if (!(cfg.econ.p >= 0 && cfg.econ.p <= 1)) fail("econ.p", "must lie in [0, 1]");
    if (!(cfg.econ.l >= 0)) fail("econ.l", "must be >= 0");
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string dump = config_to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string identity_comment(const ExperimentConfig& cfg) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "config_hash=%016" PRIx64 ", seed=%" PRIu64,
                  config_hash(cfg), cfg.seed);
    return buf;
}

} // namespace v2g::harness
