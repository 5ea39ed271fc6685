#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "v2g/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> iterations;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_out) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "override the config's seed");
    cmd->add_option("--iterations", opts.iterations, "override the learner's iteration count");
    opts.out_path = default_out;
    cmd->add_option("--out", opts.out_path, "output path");
}

v2g::harness::ExperimentConfig load(const CommonOpts& opts) {
    auto cfg = v2g::harness::load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.iterations) {
        cfg.learner.iterations = *opts.iterations;
        v2g::harness::validate_experiment(cfg);
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"V2G charging/discharging insurance toolkit"};
    app.require_subcommand(1);

    CommonOpts train_opts, sweep_opts, voi_opts, econ_opts, verify_opts;

    CLI::App* train = app.add_subcommand(
        "train", "learn a policy; write trajectories, final policy, and parameters");
    add_common(train, train_opts, "train.csv");

    CLI::App* sweep =
        app.add_subcommand("sweep", "train and evaluate across a parameter axis");
    add_common(sweep, sweep_opts, "sweep.csv");
    std::string axis_override;
    sweep->add_option("--axis", axis_override,
                      "override the sweep axis (consumption_rate|unavail_prob|premium)");

    CLI::App* voi = app.add_subcommand("voi", "station-choice value-of-information tables");
    add_common(voi, voi_opts, "voi.csv");

    CLI::App* econ = app.add_subcommand("econ", "insurance economics calculators");
    econ->require_subcommand(1);
    CLI::App* econ_premium =
        econ->add_subcommand("premium", "maximum acceptable premium decomposition");
    CLI::App* econ_protect =
        econ->add_subcommand("protect", "self-protection vs insurance decision");
    CLI::App* econ_ids = econ->add_subcommand("ids", "two-agent interdependent-security game");
    for (CLI::App* sub : {econ_premium, econ_protect, econ_ids})
        add_common(sub, econ_opts, ""); // empty out -> stdout

    CLI::App* verify =
        app.add_subcommand("verify", "cross-check the exact average-cost gradient");
    add_common(verify, verify_opts, "");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            v2g::harness::cmd_train(load(train_opts), train_opts.out_path);
        } else if (sweep->parsed()) {
            auto cfg = load(sweep_opts);
            if (!axis_override.empty())
                cfg.sweep.axis = v2g::harness::sweep_axis_from_string(axis_override);
            v2g::harness::cmd_sweep(cfg, sweep_opts.out_path);
        } else if (voi->parsed()) {
            v2g::harness::cmd_voi(load(voi_opts), voi_opts.out_path);
        } else if (econ->parsed()) {
            using v2g::harness::EconCommand;
            const EconCommand which = econ_premium->parsed()  ? EconCommand::Premium
                                      : econ_protect->parsed() ? EconCommand::Protect
                                                               : EconCommand::Ids;
            v2g::harness::cmd_econ(load(econ_opts), which, econ_opts.out_path);
        } else if (verify->parsed()) {
            return v2g::harness::cmd_verify(load(verify_opts));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
