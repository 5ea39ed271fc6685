#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "v2g/econ.hpp"
#include "v2g/learning.hpp"
#include "v2g/model.hpp"
#include "v2g/voi.hpp"

namespace v2g::harness {

enum class SweepAxis { ConsumptionRate, UnavailProb, Premium };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::ConsumptionRate;
    std::vector<double> values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

struct EvalSpec {
    long horizon = 100000;
    int replications = 5;
};

struct VoiSpec {
    int stations = 20;
    std::vector<int> counts{5, 10, 15, 20};
    long trials = 50000;
    std::vector<double> price_levels{0.15, 0.2, 0.25};
    double width = 10.0;
    double height = 10.0;
    VehicleParams vehicle;
    std::string topology_csv;        // when set, stations are read from this file
    std::uint64_t layout_seed = 79;  // default station layout is fixed, independent of the run seed
};

struct EconSpec {
    econ::UtilitySpec utility = econ::UtilitySpec::logarithmic();
    double w0 = 10.0;
    double l = 5.0;
    double p = 0.5;
    std::vector<econ::ProtectionStep> protection{{0.0, 0.5}, {2.0, 0.05}};
    std::optional<double> insurance_price;
    // interdependent game; wealth and utility are shared with the fields above
    double ids_p = 0.1;
    double ids_q = 0.2;
    double ids_l = 4.0;
    double ids_c = 0.3;
};

// Everything a run needs, loadable from one JSON document. Unknown keys are
// rejected so typos surface instead of silently keeping defaults.
struct ExperimentConfig {
    EnvConfig env;
    LearnerConfig learner;
    EvalSpec eval;
    SweepSpec sweep;
    VoiSpec voi;
    EconSpec econ;
    std::uint64_t seed = 42;
};

ExperimentConfig default_experiment();

// Starts from defaults and applies the fields present in j; throws
// std::invalid_argument naming the offending field on type or value errors.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

void validate_experiment(const ExperimentConfig& cfg);

// FNV-1a over the canonical (sorted-key) JSON dump; stamped into every CSV.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// "config_hash=<16 hex digits>, seed=<decimal>"
std::string identity_comment(const ExperimentConfig& cfg);

} // namespace v2g::harness
