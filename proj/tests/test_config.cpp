// SPDX-License-Identifier: Apache-2.0
//
// nafdsim  c++ system-level simulator for cell-free massive MIMO networks
// with network-assisted full-duplex operation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "nafdsim/config.hpp"
#include "nafdsim/experiment.hpp"

using namespace nafd;

TEST_CASE("an empty configuration yields the documented defaults")
{
    const ExperimentConfig cfg = parse_config("", "defaults.ini");
    CHECK(cfg.topology.n_aps == 40);
    CHECK(cfg.topology.n_dl_ues == 4);
    CHECK(cfg.topology.n_ul_ues == 4);
    CHECK(cfg.topology.side_length == 500.0);
    CHECK(cfg.topology.min_ap_distance == 50.0);
    CHECK(cfg.channel.n_antennas == 4);
    CHECK(cfg.channel.tau_c == 200.0);
    CHECK(cfg.channel.tau_t == 0.0); // resolved to K_d + K_u downstream
    CHECK(cfg.channel.si_over_noise_db == 50.0);
    CHECK(cfg.noise_figure_db == 9.0);
    CHECK(cfg.upsilon == 50.0);
    CHECK(cfg.precode_mode == PrecodeMode::PZF);
    CHECK(cfg.power_exponent == -0.5);
    CHECK(cfg.hd_split == 0.5);
    CHECK(cfg.n_topologies == 50);
    REQUIRE(cfg.qos_grid.size() == 1);
    CHECK(cfg.qos_grid[0] == 0.0);
    CHECK(cfg.nafd_solver == "greedy");
    REQUIRE(cfg.structures.size() == 3);
    CHECK(cfg.structures[0] == Structure::NAFD);
    CHECK(cfg.structures[1] == Structure::FD);
    CHECK(cfg.structures[2] == Structure::HD);
    CHECK(cfg.mc_draws == 10000);
    CHECK(cfg.seed == 1);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.energy.eps_ap == 0.4);
    CHECK(cfg.energy.fh_traffic == Catch::Approx(0.25e-9).epsilon(1e-12));
}

TEST_CASE("transmit SNRs resolve from the link budget")
{
    // 0.1 W over thermal noise at 20 MHz with a 9 dB noise figure:
    // 20 dBm - (-174 + 73.01 + 9) dBm = 111.99 dB.
    const ExperimentConfig cfg = parse_config("", "defaults.ini");
    const double noise_dbm = -174.0 + 10.0 * std::log10(20e6) + 9.0;
    const double expect_db = 10.0 * std::log10(0.1 * 1e3) - noise_dbm;
    CHECK(10.0 * std::log10(cfg.channel.rho_d) == Catch::Approx(expect_db).epsilon(1e-9));
    CHECK(cfg.channel.rho_u == Catch::Approx(cfg.channel.rho_d).epsilon(1e-12)); // same 0.1 W budget
    CHECK(cfg.channel.rho_t == Catch::Approx(cfg.channel.rho_u).epsilon(1e-12));
    CHECK(cfg.channel.rho_d == Catch::Approx(1.5811e11).epsilon(1e-3));
}

TEST_CASE("explicit dB overrides take precedence over the link budget")
{
    const std::string text = "[channel]\nrho_d_db = 100\nrho_u_db = 90\n";
    const ExperimentConfig cfg = parse_config(text, "override.ini");
    CHECK(cfg.channel.rho_d == Catch::Approx(1e10).epsilon(1e-12));
    CHECK(cfg.channel.rho_u == Catch::Approx(1e9).epsilon(1e-12));
    // The pilot SNR follows the uplink override when not set itself.
    CHECK(cfg.channel.rho_t == Catch::Approx(1e9).epsilon(1e-12));
}

TEST_CASE("sections and keys parse into their fields")
{
    const std::string text =
        "# comment line\n"
        "[topology]\n"
        "n_aps = 8\n"
        "n_dl_ues = 2\n"
        "n_ul_ues = 3\n"
        "side_length = 250\n"
        "; alternate comment style\n"
        "[channel]\n"
        "n_antennas = 8\n"
        "tau_c = 100\n"
        "tau_t = 5\n"
        "si_over_noise_db = 40\n"
        "[precoding]\n"
        "upsilon = 75\n"
        "mode = fzf\n"
        "[power]\n"
        "exponent = 0\n"
        "hd_split = 0.3\n"
        "[energy]\n"
        "eps_ap = 0.35\n"
        "p_sic = 0.8\n"
        "bandwidth_hz = 10e6\n"
        "fh_traffic_w_per_gbps = 0.2\n"
        "[experiment]\n"
        "n_topologies = 7\n"
        "qos_grid = 0, 0.9, 1.8\n"
        "nafd_solver = exhaustive\n"
        "structures = nafd, smallcell\n"
        "n_fading_draws = 500\n"
        "seed = 99\n"
        "output = results\n";
    const ExperimentConfig cfg = parse_config(text, "full.ini");
    CHECK(cfg.topology.n_aps == 8);
    CHECK(cfg.topology.n_ul_ues == 3);
    CHECK(cfg.topology.side_length == 250.0);
    CHECK(cfg.channel.n_antennas == 8);
    CHECK(cfg.channel.tau_c == 100.0);
    CHECK(cfg.channel.tau_t == 5.0);
    CHECK(cfg.channel.si_over_noise_db == 40.0);
    CHECK(cfg.upsilon == 75.0);
    CHECK(cfg.precode_mode == PrecodeMode::FZF);
    CHECK(cfg.power_exponent == 0.0);
    CHECK(cfg.hd_split == 0.3);
    CHECK(cfg.energy.eps_ap == 0.35);
    CHECK(cfg.energy.p_sic == 0.8);
    CHECK(cfg.energy.bandwidth == 10e6);
    CHECK(cfg.energy.fh_traffic == Catch::Approx(0.2e-9).epsilon(1e-12));
    CHECK(cfg.n_topologies == 7);
    REQUIRE(cfg.qos_grid.size() == 3);
    CHECK(cfg.qos_grid[1] == 0.9);
    CHECK(cfg.nafd_solver == "exhaustive");
    REQUIRE(cfg.structures.size() == 2);
    CHECK(cfg.structures[1] == Structure::SMALLCELL);
    CHECK(cfg.mc_draws == 500);
    CHECK(cfg.seed == 99);
    CHECK(cfg.output_dir == "results");
}

TEST_CASE("malformed input is reported with its source line")
{
    CHECK_THROWS_WITH(parse_config("[topology]\nn_aps 8\n", "bad.ini"),
                      Catch::Matchers::ContainsSubstring("bad.ini:2"));
    CHECK_THROWS_WITH(parse_config("[topology]\n\nn_aps = x\n", "bad.ini"),
                      Catch::Matchers::ContainsSubstring("bad.ini:3"));
    CHECK_THROWS_AS(parse_config("n_aps = 8\n", "bad.ini"), config_error); // key before any section
}

TEST_CASE("unknown sections and keys are rejected by name")
{
    CHECK_THROWS_WITH(parse_config("[nosuch]\n", "u.ini"), Catch::Matchers::ContainsSubstring("nosuch"));
    CHECK_THROWS_WITH(parse_config("[topology]\nwidth = 3\n", "u.ini"),
                      Catch::Matchers::ContainsSubstring("width"));
    CHECK_THROWS_WITH(parse_config("[experiment]\nstructures = nafd, tdd\n", "u.ini"),
                      Catch::Matchers::ContainsSubstring("tdd"));
    CHECK_THROWS_WITH(parse_config("[experiment]\nnafd_solver = random\n", "u.ini"),
                      Catch::Matchers::ContainsSubstring("random"));
    CHECK_THROWS_WITH(parse_config("[precoding]\nmode = zf\n", "u.ini"), Catch::Matchers::ContainsSubstring("zf"));
}

TEST_CASE("structure lists parse independently")
{
    const std::vector<Structure> all = parse_structure_list("nafd, fd, hd, smallcell");
    REQUIRE(all.size() == 4);
    CHECK(all[0] == Structure::NAFD);
    CHECK(all[3] == Structure::SMALLCELL);
    CHECK_THROWS_AS(parse_structure_list("fd, bogus"), config_error);
}

TEST_CASE("experiment runs are reproducible byte for byte")
{
    const std::string text =
        "[topology]\n"
        "n_aps = 4\n"
        "n_dl_ues = 2\n"
        "n_ul_ues = 2\n"
        "[experiment]\n"
        "n_topologies = 2\n"
        "qos_grid = 0, 1\n"
        "structures = nafd, hd\n";
    const ExperimentConfig cfg = parse_config(text, "repro.ini");
    const ExperimentOutput a = run_experiment(cfg, 5);
    const ExperimentOutput b = run_experiment(cfg, 5);
    CHECK(a.summary_csv == b.summary_csv);
    CHECK(a.per_topology_csv == b.per_topology_csv);
    CHECK(a.topology_csv == b.topology_csv);
    CHECK(a.plot_csv == b.plot_csv);
    const ExperimentOutput c = run_experiment(cfg, 6);
    CHECK(a.per_topology_csv != c.per_topology_csv);
}

TEST_CASE("experiment outputs have the advertised shapes")
{
    const std::string text =
        "[topology]\n"
        "n_aps = 4\n"
        "n_dl_ues = 2\n"
        "n_ul_ues = 1\n"
        "[experiment]\n"
        "n_topologies = 3\n"
        "qos_grid = 0, 0.5\n"
        "structures = nafd, fd, hd, smallcell\n";
    const ExperimentConfig cfg = parse_config(text, "shape.ini");
    const ExperimentOutput out = run_experiment(cfg, 2);

    // 4 structures x 2 floors.
    CHECK(out.summaries.size() == 8);
    for (const SweepSummary &s : out.summaries)
    {
        CHECK(s.n_topologies == 3);
        CHECK(s.feasibility_rate >= 0.0);
        CHECK(s.feasibility_rate <= 1.0);
        CHECK(s.mean_ee > 0.0);
    }

    auto count_lines = [](const std::string &text_in) {
        std::istringstream in(text_in);
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line))
            n++;
        return n;
    };
    CHECK(count_lines(out.summary_csv) == 1 + 8);
    CHECK(count_lines(out.per_topology_csv) == 1 + 3 * 8);
    CHECK(count_lines(out.topology_csv) == 1 + 3 * (4 + 2 + 1));
    // Three metrics, one curve per structure, one point per floor.
    CHECK(count_lines(out.plot_csv) == 1 + 3 * 4 * 2);

    std::istringstream in(out.summary_csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "structure,qos,n_topologies,feasibility_rate,mean_ee,mean_ee_feasible,mean_sum_se,"
                    "mean_min_dl_se,mean_min_ul_se");
}
