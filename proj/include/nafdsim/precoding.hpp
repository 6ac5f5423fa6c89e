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
#include <cstddef>
#include <vector>

#include "nafdsim/channel.hpp"

namespace nafd
{

enum class CombinerMode
{
    ZF,
    MR
};

enum class PrecodeMode
{
    PZF, // strong set from the cumulative-share rule at the configured percentage
    FZF, // force everything strong (share 100)
    MRT  // force everything weak (share 0)
};

// Per-AP partition of the UEs of each direction into a "strong" set (served
// with zero forcing) and a "weak" set (served with maximum ratio). A UE the
// AP does not serve at all (small-cell usage) is in neither set; the
// cell-free evaluators use all-ones serve masks.
struct GroupingAssignment
{
    std::size_t n_antennas = 0;
    arma::umat strong_dl; // M x K_d, 1 when the DL UE is in the AP's strong set
    arma::umat strong_ul; // M x K_u
    arma::umat served_dl; // M x K_d, 1 when the AP serves the UE in that direction
    arma::umat served_ul; // M x K_u
    arma::uvec n_strong_dl; // per-AP strong-set sizes |S|
    arma::uvec n_strong_ul;

    // Zero-forcing dimension margin N - |S| for the AP's direction.
    double zf_margin_dl(std::size_t m) const { return double(n_antennas) - double(n_strong_dl(m)); }
    double zf_margin_ul(std::size_t m) const { return double(n_antennas) - double(n_strong_ul(m)); }

    // Ascending UE indices of one AP's strong set (the ZF matrix column order).
    std::vector<arma::uword> strong_dl_indices(std::size_t m) const;
    std::vector<arma::uword> strong_ul_indices(std::size_t m) const;
};

// Strong-set selection for one AP and one direction: sort gains descending
// (ties broken toward the lower UE index), take the smallest prefix whose
// share of the total gain reaches `upsilon` percent, then truncate to at
// most n_antennas - 1 members keeping the largest gains. Returns member
// indices in ascending order.
std::vector<arma::uword> strong_prefix(const arma::vec &betas, double upsilon, std::size_t n_antennas);

// Applies strong_prefix per AP and per direction over the long-term gains.
GroupingAssignment group_ues(const LargeScaleModel &ls, double upsilon, std::size_t n_antennas);

// Share percentage actually used for a precoding mode.
double effective_upsilon(PrecodeMode mode, double upsilon);

// Zero-forcing vector for the strong-set member in column k_col of the
// estimate matrix: gamma_k * G (G^H G)^-1 e_k. Satisfies
// ghat_j^H v = gamma_k * (j == k_col) for every column j.
// Throws std::invalid_argument on bad shapes and std::runtime_error when the
// Gram matrix is numerically singular.
arma::cx_vec zf_precoder(const arma::cx_mat &ghat_strong, arma::uword k_col, double gamma_k);

// Maximum-ratio vector: the channel estimate itself.
arma::cx_vec mrt_precoder(const arma::cx_vec &ghat_k);

// Receive combiner for UL estimates; same construction rules as the
// transmit side. In MR mode only column ell_col of the matrix is read.
arma::cx_vec ul_combiner(const arma::cx_mat &ghat_strong, arma::uword ell_col, double gamma_ell, CombinerMode mode);

} // namespace nafd
