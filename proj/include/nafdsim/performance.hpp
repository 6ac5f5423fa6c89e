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

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "nafdsim/channel.hpp"
#include "nafdsim/precoding.hpp"

namespace nafd
{

// Network architecture under evaluation.
//  NAFD      - half-duplex APs split into a DL-mode set and an UL-mode set
//  FD        - every AP transmits and receives simultaneously (self-interference)
//  HD        - every AP serves DL and UL in separate time fractions
//  SMALLCELL - every UE served by a single full-duplex AP
enum class Structure
{
    NAFD,
    FD,
    HD,
    SMALLCELL
};

std::string structure_name(Structure s);

// Per-AP direction activity. For NAFD the two binary vectors partition the
// APs; FD/HD/SMALLCELL keep every AP active in both directions (HD separates
// them in time via hd_split).
struct DuplexAssignment
{
    Structure structure = Structure::NAFD;
    std::vector<std::uint8_t> a; // 1 = AP is DL-active
    std::vector<std::uint8_t> b; // 1 = AP is UL-active
    double hd_split = 0.5;       // HD only: fraction of time spent on DL

    std::size_t n_aps() const { return a.size(); }
};

DuplexAssignment all_on_duplex(Structure s, std::size_t m, double hd_split = 0.5);
DuplexAssignment nafd_duplex(const std::vector<std::uint8_t> &a, double hd_split = 0.5);

// Throws std::invalid_argument naming the offending field when the structure
// constraints (NAFD: a+b=1; others: a=b=1) or ranges are violated.
void validate_duplex(const DuplexAssignment &d);

// Power-control state. theta are the per-(AP, DL-UE) transmit multipliers in
// the normalization where an AP transmitting at full budget has
//   sum_strong theta^2 gamma/(N-|S|) + sum_weak theta^2 N gamma = 1,
// i.e. expected transmit power equals rho_d. (The multipliers themselves are
// unbounded above; the per-AP sum is what is constrained.) varsigma are UL
// UE power fractions in [0,1] and alpha the CPU combining weights.
struct PowerAllocation
{
    arma::mat theta;    // M x K_d, >= 0
    arma::vec varsigma; // K_u, in [0, 1]
    arma::mat alpha;    // M x K_u, |alpha| <= 1
    double rho_d = 0.0; // normalized DL SNR (per-AP budget over noise)
    double rho_u = 0.0; // normalized UL SNR (per-UE full power over noise)
};

// One UE's SINR decomposition. The spectral efficiency uses the
// use-and-then-forget bound: the mean coherent gain is the signal, all
// fluctuation is effective noise.
//   desired_power    - squared mean coherent gain
//   beam_uncertainty - variance of the own-stream gain
//   multiuser        - other same-direction streams (DL: other DL UEs;
//                      UL: other UL UEs)
//   cross_link       - opposite-direction leakage (DL UE: UL UEs;
//                      UL UE: DL-transmitting APs incl. self-interference)
//   noise            - 1 for DL; receive-combiner noise gain for UL
struct UeTerms
{
    double se = 0.0;
    double prelog = 0.0;
    double desired_power = 0.0;
    double beam_uncertainty = 0.0;
    double multiuser = 0.0;
    double cross_link = 0.0;
    double noise = 0.0;

    double denominator() const { return beam_uncertainty + multiuser + cross_link + noise; }
    double sinr() const { return denominator() > 0.0 ? desired_power / denominator() : 0.0; }
};

struct SEReport
{
    Structure structure = Structure::NAFD;
    std::vector<UeTerms> dl;
    std::vector<UeTerms> ul;

    double sum_se() const;
    double min_dl_se() const; // +inf when there are no DL UEs
    double min_ul_se() const;
};

// Closed-form evaluation of the per-UE SE and its term decomposition.
std::vector<UeTerms> dl_se_closed_form(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                       const DuplexAssignment &duplex, const PowerAllocation &power);
std::vector<UeTerms> ul_se_closed_form(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                       const DuplexAssignment &duplex, const PowerAllocation &power);
SEReport closed_form_report(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                            const DuplexAssignment &duplex, const PowerAllocation &power);

// Monte-Carlo oracle: simulates the received DL signal and the CPU-combined
// UL signal over n_draws independent fading realizations and decomposes the
// empirical powers into the same terms as the closed form. Draw d uses a
// seed derived from (seed, d) and partial sums are reduced in fixed block
// order, so results do not depend on n_threads.
SEReport mc_estimate_terms(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                           const DuplexAssignment &duplex, const PowerAllocation &power,
                           std::size_t n_draws, std::uint64_t seed, unsigned n_threads = 1);

// Small-cell baseline: each UE is served by exactly one AP.
struct ServingAssignment
{
    std::vector<arma::uword> dl_serving_ap; // length K_d
    std::vector<arma::uword> ul_serving_ap; // length K_u
};

// Largest-gain AP per UE; ties resolved toward the lower AP index.
ServingAssignment strongest_ap_assignment(const LargeScaleModel &ls);

// Grouping restricted to each AP's own cell: the strong/weak split is applied
// within the UEs the AP serves, and foreign UEs are in neither set.
GroupingAssignment smallcell_grouping(const LargeScaleModel &ls, const ServingAssignment &serving,
                                      double upsilon, std::size_t n_antennas);

// Evaluates the small-cell SE with the cell-free machinery restricted to the
// serving AP: desired terms keep only the serving AP's contribution while
// denominators keep every active node's leakage (all APs are full-duplex).
SEReport smallcell_se(const LargeScaleModel &ls, const ServingAssignment &serving, const PowerAllocation &power,
                      double upsilon, std::size_t n_antennas);

// CSV with one row per UE:
// structure,ue_kind,ue_index,se,prelog,desired_power,beam_uncertainty,multiuser,cross_link,noise
std::string se_report_csv(const SEReport &report);

} // namespace nafd
