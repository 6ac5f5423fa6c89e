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

#include "nafdsim/performance.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nafd
{

// Power consumption model covering the compared network architectures:
// cell-free deployments (NAFD, full-duplex, half-duplex, small cells) and
// the co-located cellular baselines. Amplifier efficiencies are dimensionless
// in (0, 1]; every power is in watt; the fronthaul traffic coefficient is in
// watt per bit/s.
struct PowerModelParams
{
    double eps_ap = 0.4;  // AP power amplifier efficiency
    double eps_ue = 0.3;  // UE power amplifier efficiency
    double eps_bs = 0.4;  // cellular base-station amplifier efficiency

    double p_ap_tx = 0.1; // AP maximum transmit power
    double p_ue_tx = 0.1; // UE maximum transmit power
    double p_bs_tx = 1.0; // cellular base-station maximum transmit power

    double p_ue_circuit = 0.1;  // per-UE circuit power while transmitting
    double p_ap_dyn_tx = 0.2;   // per-antenna transmit-chain power
    double p_ap_dyn_rx = 0.2;   // per-antenna receive-chain power
    double p_ap_static = 0.1;   // per-node static power
    double p_sic = 1.0;         // per-antenna self-interference cancellation

    double fh_fixed = 0.825;    // fixed power of one fronthaul link
    double fh_traffic = 0.25e-9; // traffic-dependent fronthaul power, W per bit/s

    double bandwidth = 20e6; // Hz, converts spectral efficiency to rate

    std::size_t n_bs_tx = 4; // transmit antennas of the cellular base station
    std::size_t n_bs_rx = 4; // receive antennas of the cellular base station
};

// Throws std::invalid_argument naming the offending field.
void validate_power_model(const PowerModelParams &p);

// Power of one fronthaul link carrying rate_bps: a fixed share plus a
// traffic-proportional share.
double fronthaul_power(double rate_bps, const PowerModelParams &p);

// Circuit power of one n_antennas AP with both chain sets powered.
double ap_circuit_power(std::size_t n_antennas, const PowerModelParams &p);

// Co-located half-duplex cellular baseline: transmitting UL UEs, the
// base-station amplifier, and its transceiver chains.
double total_power_hd_cellular(std::size_t n_ul_ues, const PowerModelParams &p);

// Full-duplex cellular baseline: both directions run concurrently, so the
// half-duplex consumption is doubled and each receive chain needs
// self-interference cancellation.
double total_power_fd_cellular(std::size_t n_ul_ues, const PowerModelParams &p);

// Full-duplex cell-free deployment: transmitting UL UEs plus, per AP,
// amplifier, circuit, per-antenna cancellation, and one fronthaul link loaded
// with the aggregate rate of both directions. se_dl_sum/se_ul_sum are network
// sums in bit/s/Hz.
double total_power_fd_cellfree(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues, std::size_t n_aps,
                               std::size_t n_antennas, const PowerModelParams &p);

// Half-duplex (time-switched) cell-free deployment: as full-duplex but with
// no cancellation stages.
double total_power_hd_cellfree(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues, std::size_t n_aps,
                               std::size_t n_antennas, const PowerModelParams &p);

// Network-assisted full-duplex deployment: amplifier and circuit power are
// drawn by DL-mode APs; every AP keeps a fronthaul link whose traffic share
// carries the aggregate rate of that AP's own direction. Any AP active in
// both directions additionally powers per-antenna cancellation.
double total_power_nafd(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues,
                        const std::vector<std::uint8_t> &a, const std::vector<std::uint8_t> &b,
                        std::size_t n_antennas, const PowerModelParams &p);

// Consumption of the architecture described by the report's structure and
// duplex assignment (small cells reuse the full-duplex cell-free model).
double total_power(const SEReport &report, const DuplexAssignment &duplex, std::size_t n_antennas,
                   const PowerModelParams &p);

// Ratio of aggregate spectral efficiency to total consumed power,
// bit/s/Hz per watt.
double energy_efficiency(double sum_se, double total_power_w);

// Same ratio scaled by the bandwidth: delivered bits per joule.
double energy_efficiency_bits_per_joule(double sum_se, double total_power_w, double bandwidth_hz);

} // namespace nafd
