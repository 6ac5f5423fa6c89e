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

#include "nafdsim/energy.hpp"
#include "nafdsim/performance.hpp"
#include "nafdsim/precoding.hpp"

#include <cstddef>

namespace nafd
{

// Per-UE spectral-efficiency floors, possibly different per direction.
struct QosSpec
{
    double qos_dl = 0.0; // bit/s/Hz
    double qos_ul = 0.0; // bit/s/Hz

    QosSpec() = default;
    explicit QosSpec(double common) : qos_dl(common), qos_ul(common) {}
    QosSpec(double dl, double ul) : qos_dl(dl), qos_ul(ul) {}
};

// Outcome of checking per-UE spectral efficiencies against the floors.
// slack is the worst margin min(se - floor) over all UEs of both directions
// (+inf when the network has no UEs).
struct QosResult
{
    bool feasible = false;
    double slack = 0.0;
};

QosResult check_qos(const SEReport &report, const QosSpec &qos);
QosResult check_qos(const SEReport &report, double qos);

// Fractional power control: each DL-active AP splits its budget over the UEs
// it serves with multipliers proportional to gamma^exponent, normalized so
// the expected transmit power meets the budget with equality. UL UEs send at
// full power and every UL-active AP contributes its combiner with unit
// weight.
PowerAllocation power_rule_fractional(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                      const DuplexAssignment &duplex, double exponent, double rho_d, double rho_u);

// Shared knobs of the architecture evaluation and duplex mode search.
struct ModeSelectConfig
{
    double upsilon = 50.0;         // strong-group share threshold, percent
    std::size_t n_antennas = 4;    // antennas per AP
    double qos = 0.0;              // per-UE spectral-efficiency floor, bit/s/Hz
    double power_exponent = -0.5;  // fractional power-control exponent
    double rho_d = 1.0;            // normalized DL transmit SNR
    double rho_u = 1.0;            // normalized UL transmit SNR
    PowerModelParams power_model;  // consumption model for the EE objective
    std::size_t max_exhaustive_aps = 16; // enumeration guard
};

// One evaluated architecture configuration: its duplex pattern, the power
// allocation the rule produced, the closed-form report, and the resulting
// energy efficiency and QoS outcome.
struct EvaluationResult
{
    DuplexAssignment duplex;
    PowerAllocation power;
    SEReport report;
    double ee = 0.0;
    bool feasible = false;
    double slack = 0.0;
    std::size_t n_evaluated = 0; // candidates examined by a search (1 here)
};

// Evaluates a fixed duplex assignment end to end: UE grouping, fractional
// power control, closed-form spectral efficiencies, total power, EE, QoS.
EvaluationResult evaluate_architecture(const LargeScaleModel &ls, const DuplexAssignment &duplex,
                                       const ModeSelectConfig &cfg);

// Enumerates every DL/UL mode split over the APs (2^M candidates) and returns
// the best by the total order: a QoS-feasible candidate beats any infeasible
// one; among feasible candidates higher EE wins; among infeasible ones larger
// slack wins. Ties keep the lexicographically smallest DL-mode vector.
// Throws std::invalid_argument when the AP count exceeds
// max_exhaustive_aps.
EvaluationResult exhaustive_mode_select(const LargeScaleModel &ls, const ModeSelectConfig &cfg);

// Local search over the same candidate space: starts with every AP assigned
// to the direction with the larger aggregate channel gain, then repeatedly
// applies the single-AP mode flip that improves the total order the most
// (lowest AP index on ties), stopping when no flip improves strictly.
EvaluationResult greedy_mode_select(const LargeScaleModel &ls, const ModeSelectConfig &cfg);

} // namespace nafd
