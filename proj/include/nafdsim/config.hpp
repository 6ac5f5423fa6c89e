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

#pragma once

#include "nafdsim/channel.hpp"
#include "nafdsim/energy.hpp"
#include "nafdsim/performance.hpp"
#include "nafdsim/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nafd
{

// Raised for any malformed configuration input; the message carries the file
// name, line number, and offending key.
class config_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Complete description of one experiment, filled from an INI-style file with
// sections [topology], [channel], [precoding], [power], [energy], and
// [experiment]. Unset keys keep the defaults below.
struct ExperimentConfig
{
    TopologyConfig topology;

    ChannelConfig channel; // rho values resolved by finalize_config

    // [channel] keys feeding the link-budget resolution: unless rho_*_db
    // overrides are given, the normalized SNRs follow from the transmit
    // powers, thermal noise over the energy-model bandwidth, and this noise
    // figure.
    double noise_figure_db = 9.0;
    double rho_d_db = std::numeric_limits<double>::quiet_NaN(); // override, dB
    double rho_u_db = std::numeric_limits<double>::quiet_NaN(); // override, dB
    double rho_t_db = std::numeric_limits<double>::quiet_NaN(); // override, dB

    // [precoding]
    double upsilon = 50.0;
    PrecodeMode precode_mode = PrecodeMode::PZF;

    // [power]
    double power_exponent = -0.5;
    double hd_split = 0.5;

    // [energy]
    PowerModelParams energy;

    // [experiment]
    std::size_t n_topologies = 50;
    std::vector<double> qos_grid = {0.0};
    std::string nafd_solver = "greedy"; // greedy | exhaustive
    std::vector<Structure> structures = {Structure::NAFD, Structure::FD, Structure::HD};
    std::size_t mc_draws = 10000;       // fading draws of the validation estimator
    std::uint64_t seed = 1;             // master seed; the --seed flag overrides
    std::string output_dir = "out";     // output path; the --output flag overrides
};

// Parses INI text. source_name only labels error messages.
ExperimentConfig parse_config(const std::string &text, const std::string &source_name);

// Reads and parses a configuration file.
ExperimentConfig load_config(const std::string &path);

// Derives the normalized SNRs (linear) from the link budget: transmit power
// over thermal noise at the configured bandwidth and noise figure, unless a
// direct dB override is present. Called by parse_config; exposed for
// programmatic configs.
void finalize_config(ExperimentConfig &cfg);

// Parses a comma-separated structure list ("nafd,fd,hd,smallcell"); throws
// config_error on unknown names.
std::vector<Structure> parse_structure_list(const std::string &text);

} // namespace nafd
