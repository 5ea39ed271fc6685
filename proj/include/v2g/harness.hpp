#pragma once

#include <string>

#include "v2g/config.hpp"
#include "v2g/voi.hpp"

namespace v2g::harness {

// Parses a station table: optional "x,y,price" header, then one
// comma-separated numeric triple per line. Errors carry path:line.
Topology load_topology_csv(const std::string& path);

struct TrainOutputs {
    std::string trajectories_csv; // policy,iteration,psi_tilde,cumulative_mean_cost
    std::string policy_csv;       // final learned action probabilities per state
    std::string theta_json;       // learned parameter table
    double learned_final = 0.0;   // last cumulative mean cost of each run
    double insured_final = 0.0;
    double uninsured_final = 0.0;
};

// Trains the learner and replays the two reference policies under the same
// seed (identical environment streams), collecting all three trajectories.
TrainOutputs run_train(const ExperimentConfig& cfg);

// For each axis value: train, then evaluate learned/always-insured/
// never-insured on the modified environment. Values fan out across threads;
// rows are emitted in input order. One long-format CSV.
std::string run_sweep(const ExperimentConfig& cfg);

// Charge and discharge station-choice tables over the configured topology.
std::string run_voi(const ExperimentConfig& cfg);

enum class EconCommand { Premium, Protect, Ids };
std::string run_econ(const ExperimentConfig& cfg, EconCommand which);

struct VerifyResult {
    bool pass = false;
    std::string report; // one line per check plus a final PASS/FAIL line
};

// Cross-checks the closed-form average-cost gradient on the configured
// environment: score form vs direct assembly, and both vs central finite
// differences of the exact average cost.
VerifyResult run_verify(const ExperimentConfig& cfg);

// CLI-facing wrappers: run and write. cmd_train derives the policy table and
// parameter paths from out_path by appending "_policy.csv" / "_theta.json"
// to its stem.
void cmd_train(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_sweep(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_voi(const ExperimentConfig& cfg, const std::string& out_path);
// empty out_path -> stdout
void cmd_econ(const ExperimentConfig& cfg, EconCommand which, const std::string& out_path);
// prints the report; returns process exit code (0 pass, 1 fail)
int cmd_verify(const ExperimentConfig& cfg);

} // namespace v2g::harness
