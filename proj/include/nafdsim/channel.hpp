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
#include <vector>

#include "nafdsim/topology.hpp"

namespace nafd
{

struct ChannelConfig
{
    std::size_t n_antennas = 4; // N, per AP
    double tau_c = 200.0;       // coherence block length, symbols
    double tau_t = 0.0;         // pilot length, symbols; 0 means "use K_d + K_u"

    // Normalized (noise-relative) SNRs, linear scale. rho_d applies to each
    // AP's full transmit power budget, rho_u to a UL UE at full power, rho_t
    // to pilot symbols.
    double rho_d = 0.0;
    double rho_u = 0.0;
    double rho_t = 0.0;

    // Residual self-interference strength after cancellation, expressed as
    // received-SI-power over noise-power in dB when the AP transmits at its
    // full budget. See LargeScaleModel::si_variance for how it is applied.
    double si_over_noise_db = 50.0;

    // Testing hook: force gamma = beta (perfect channel estimates).
    bool perfect_csi = false;
};

// All large-scale state of one network realization: linear power gains per
// link class plus the MMSE estimate variances derived from them.
struct LargeScaleModel
{
    arma::mat beta_dl; // M x K_d, AP -> DL-UE gains
    arma::mat beta_ul; // M x K_u, AP -> UL-UE gains
    arma::mat beta_du; // K_d x K_u, UL-UE -> DL-UE gains
    arma::mat beta_ap; // M x M, inter-AP gains; diagonal = si_variance

    // Residual self-interference per AP, stored noise-normalized: the ratio
    // of received SI power to noise power at full transmit budget. The
    // equivalent loop-channel gain used wherever the SI channel enters a
    // transmit path that already carries the factor rho_d is
    // si_variance / rho_d (see performance module).
    arma::vec si_variance; // length M

    double tau_t = 0.0; // pilot length, symbols
    double tau_c = 0.0; // coherence block length, symbols

    arma::mat gamma_dl; // M x K_d, MMSE estimate variances
    arma::mat gamma_ul; // M x K_u

    std::size_t n_aps() const { return beta_dl.n_rows; }
    std::size_t n_dl_ues() const { return beta_dl.n_cols; }
    std::size_t n_ul_ues() const { return beta_ul.n_cols; }
};

// One small-scale fading realization. Entries are CN(0, beta) for the true
// channels and CN(0, gamma) for the MMSE estimates, with estimate and error
// independent.
struct SmallScaleDraw
{
    // Per AP m: N x K matrices whose k-th column is the channel to UE k.
    std::vector<arma::cx_mat> g_dl, ghat_dl; // true / estimated, DL UEs
    std::vector<arma::cx_mat> g_ul, ghat_ul; // true / estimated, UL UEs
    arma::cx_mat h_du;                       // K_d x K_u UE-to-UE scalars
    // z_ap[m][i]: N x N channel observed at AP m from AP i. The diagonal
    // entry z_ap[m][m] is the self-interference channel drawn with per-entry
    // variance si_variance(m); consumers combining it with a rho_d-scaled
    // transmit signal must rescale by 1/sqrt(rho_d).
    std::vector<std::vector<arma::cx_mat>> z_ap;
};

// Distance-based path loss in dB: -30.5 - 36.7*log10(d / 1 m).
// Throws std::invalid_argument for d <= 0 or non-finite d.
double pathloss_db(double d_m);

// Covariance (dB^2) between the shadowing terms of two UEs separated by
// delta meters: 16 * 2^(-delta/9) when observed from the same AP, else 0.
double shadowing_covariance(double delta_m, bool same_ap);

// MMSE estimate variance: tau_t*rho_t*beta^2 / (tau_t*rho_t*beta + 1).
double mmse_gamma(double beta, double tau_t, double rho_t);

// Builds the full large-scale model for a topology: path loss plus
// log-normal shadowing (jointly Gaussian per AP across all UEs, independent
// across APs), inter-AP links through the same propagation law, and the
// MMSE variances. Deterministic for a given seed.
// Throws std::invalid_argument on bad config and std::runtime_error if the
// shadowing covariance cannot be factorized even after regularization.
LargeScaleModel draw_large_scale(const NetworkTopology &topo, const ChannelConfig &cfg, std::uint64_t seed);

// Draws one small-scale realization for every link. Deterministic per seed.
SmallScaleDraw draw_small_scale(const LargeScaleModel &ls, std::size_t n, std::uint64_t seed);

} // namespace nafd
