#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "v2g/csv.hpp"
#include "v2g/harness.hpp"

using namespace v2g;
using namespace v2g::harness;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

ExperimentConfig quick_config() {
    ExperimentConfig cfg = default_experiment();
    cfg.learner.iterations = 50;
    cfg.eval.horizon = 200;
    cfg.eval.replications = 2;
    cfg.voi.trials = 100;
    return cfg;
}

} // namespace

TEST_CASE("topology files: headers, comments, and line-numbered errors") {
    const std::string path = "test_topo_tmp.csv";

    write_file(path, "x,y,price\n# midfield\n1.5,2.5,0.2\n8,1,0.15\n");
    Topology topo = load_topology_csv(path);
    REQUIRE(topo.stations.size() == 2);
    CHECK(topo.stations[0].x == 1.5);
    CHECK(topo.stations[0].y == 2.5);
    CHECK(topo.stations[0].price == 0.2);
    CHECK(topo.stations[1].price == 0.15);

    // a bare numeric first line is data, not a header
    write_file(path, "1,2,0.25\n");
    topo = load_topology_csv(path);
    REQUIRE(topo.stations.size() == 1);
    CHECK(topo.stations[0].price == 0.25);

    write_file(path, "x,y,price\n1,2,0.25\noops\n");
    CHECK_THROWS_WITH_AS(load_topology_csv(path), doctest::Contains(":3:"),
                         std::invalid_argument);

    write_file(path, "x,y,price\n");
    CHECK_THROWS_WITH_AS(load_topology_csv(path), doctest::Contains("no stations"),
                         std::invalid_argument);

    std::remove(path.c_str());
    CHECK_THROWS_AS(load_topology_csv(path), std::runtime_error);
}

TEST_CASE("training run: three labeled trajectories and a policy table") {
    const ExperimentConfig cfg = quick_config();
    const TrainOutputs out = run_train(cfg);

    const auto traj = lines_of(out.trajectories_csv);
    REQUIRE(traj.size() == 2 + 3 * 50);
    CHECK(starts_with(traj[0], "# config_hash="));
    CHECK(traj[1] == "policy,iteration,psi_tilde,cumulative_mean_cost");
    CHECK(starts_with(traj[2], "learned,1,"));
    CHECK(cells_of(traj[2]).size() == 4);
    CHECK(!cells_of(traj[2])[2].empty());               // learner reports psi
    CHECK(starts_with(traj[2 + 50], "always_insured,1,,")); // baselines do not
    CHECK(starts_with(traj[2 + 100], "never_insured,1,,"));

    const auto pol = lines_of(out.policy_csv);
    // 4 actions at the battery bounds, 6 in between, per (p, i) combination
    REQUIRE(pol.size() == 2 + (4 * 6 + 2 * 4) * 4 * 2);
    CHECK(starts_with(pol[0], "# config_hash="));
    CHECK(pol[1] == "b,p,i,a1,a2,probability");
    double psum = 0.0;
    for (int j = 0; j < 4; ++j) // the b=1,p=1,i=0 block
        psum += std::stod(cells_of(pol[2 + j])[5]);
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-9));

    const PolicyParams theta = PolicyParams::from_json(out.theta_json);
    CHECK(theta.B() == cfg.env.B);
    CHECK(theta.size() == (4 * 6 + 2 * 4) * 4 * 2);

    const TrainOutputs again = run_train(cfg);
    CHECK(again.trajectories_csv == out.trajectories_csv);
    CHECK(again.policy_csv == out.policy_csv);
    CHECK(again.theta_json == out.theta_json);
}

TEST_CASE("sweep run: long-format rows in input order") {
    ExperimentConfig cfg = quick_config();
    cfg.learner.iterations = 30;
    cfg.sweep.values = {0.3, 0.6};
    const auto lines = lines_of(run_sweep(cfg));
    REQUIRE(lines.size() == 2 + 2 * 3);
    CHECK(starts_with(lines[0], "# config_hash="));
    CHECK(cells_of(lines[1]).size() == 16);
    CHECK(cells_of(lines[1])[0] == "axis");
    CHECK(starts_with(lines[2], "consumption_rate,0.3,learned,"));
    CHECK(starts_with(lines[3], "consumption_rate,0.3,always_insured,"));
    CHECK(starts_with(lines[4], "consumption_rate,0.3,never_insured,"));
    CHECK(starts_with(lines[5], "consumption_rate,0.6,learned,"));
    for (std::size_t j = 2; j < lines.size(); ++j)
        CHECK(cells_of(lines[j]).size() == 16);
}

TEST_CASE("station-choice run: a lone station leaves nothing to learn") {
    const std::string path = "test_topo_single_tmp.csv";
    write_file(path, "x,y,price\n5,5,0.2\n");

    ExperimentConfig cfg = quick_config();
    cfg.voi.topology_csv = path;
    cfg.voi.counts = {1};
    const auto lines = lines_of(run_voi(cfg));
    std::remove(path.c_str());

    REQUIRE(lines.size() == 2 + 2); // one charge row, one discharge row
    CHECK(starts_with(lines[0], "# config_hash="));
    CHECK(lines[1] == "scenario,stations,uninformed,informed,voi,se_uninformed,"
                      "se_informed,se_voi");
    for (std::size_t j = 2; j < lines.size(); ++j) {
        const auto cells = cells_of(lines[j]);
        REQUIRE(cells.size() == 8);
        CHECK(cells[0] == (j == 2 ? "charge" : "discharge"));
        CHECK(cells[1] == "1");
        CHECK(cells[2] == cells[3]); // informed == uninformed, byte for byte
        CHECK(std::stod(cells[4]) == 0.0);
        CHECK(std::stod(cells[7]) == 0.0);
    }
}

TEST_CASE("economics runs: premium, protection, and the two-agent game") {
    const ExperimentConfig cfg = quick_config();

    const std::string premium = run_econ(cfg, EconCommand::Premium);
    CHECK(starts_with(premium, "# config_hash="));
    CHECK(premium.find("2.92893218813") != std::string::npos); // 10 - sqrt(50)
    CHECK(premium.find("log") != std::string::npos);

    const std::string protect = run_econ(cfg, EconCommand::Protect);
    CHECK(protect.find("self_protect") != std::string::npos);
    const auto pcells = cells_of(lines_of(protect)[2]);
    CHECK(pcells[4] == "2"); // c*

    const std::string ids = run_econ(cfg, EconCommand::Ids);
    const auto icells = cells_of(lines_of(ids)[2]);
    const auto iheader = cells_of(lines_of(ids)[1]);
    REQUIRE(icells.size() == iheader.size());
    CHECK(ids.find("both_protect") != std::string::npos);
    CHECK(icells[12] == "1"); // eq_ss
    CHECK(icells[15] == "0"); // eq_nn
}

TEST_CASE("gradient verification passes on the default environment") {
    ExperimentConfig cfg = default_experiment();
    const VerifyResult res = run_verify(cfg);
    CHECK(res.pass);
    CHECK(res.report.find("verify: PASS") != std::string::npos);
    CHECK(res.report.find("FAILED") == std::string::npos);
    // one line per check plus the verdict
    CHECK(lines_of(res.report).size() == 5);
}

TEST_CASE("train command writes the three artifacts next to the output path") {
    const ExperimentConfig cfg = quick_config();
    cmd_train(cfg, "test_cmd_out_tmp.csv");

    const std::string traj = read_text_file("test_cmd_out_tmp.csv");
    const std::string pol = read_text_file("test_cmd_out_tmp_policy.csv");
    const std::string theta = read_text_file("test_cmd_out_tmp_theta.json");
    CHECK(starts_with(traj, "# config_hash="));
    CHECK(starts_with(pol, "# config_hash="));
    CHECK(starts_with(theta, "{"));
    CHECK(run_train(cfg).trajectories_csv == traj);

    std::remove("test_cmd_out_tmp.csv");
    std::remove("test_cmd_out_tmp_policy.csv");
    std::remove("test_cmd_out_tmp_theta.json");
}
