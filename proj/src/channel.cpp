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

#include "nafdsim/channel.hpp"
#include "nafdsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nafd
{

double pathloss_db(double d_m)
{
    if (!(d_m > 0.0) || !std::isfinite(d_m))
        throw std::invalid_argument("pathloss_db: distance must be positive and finite");
    return -30.5 - 36.7 * std::log10(d_m);
}

double shadowing_covariance(double delta_m, bool same_ap)
{
    if (!(delta_m >= 0.0) || !std::isfinite(delta_m))
        throw std::invalid_argument("shadowing_covariance: distance must be finite and >= 0");
    if (!same_ap)
        return 0.0;
    return 16.0 * std::exp2(-delta_m / 9.0);
}

double mmse_gamma(double beta, double tau_t, double rho_t)
{
    if (!(beta >= 0.0))
        throw std::invalid_argument("mmse_gamma: beta must be >= 0");
    if (!(tau_t >= 1.0))
        throw std::invalid_argument("mmse_gamma: tau_t must be >= 1");
    if (!(rho_t > 0.0))
        throw std::invalid_argument("mmse_gamma: rho_t must be > 0");
    const double x = tau_t * rho_t * beta;
    return x * beta / (x + 1.0);
}

// ----- helpers --------------------------------------------------------------

// Path-loss distances below 1 m are clamped so the law stays bounded.
static double clamped_distance(const Point2 &p, const Point2 &q, double side)
{
    return std::max(1.0, wrap_distance(p, q, side));
}

static double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

// Lower-triangular factor of the joint shadowing covariance of all UEs seen
// from one AP. Entries depend only on UE-UE wrap distances. A tiny diagonal
// regularization is added if plain Cholesky fails (co-located UEs make the
// matrix singular).
static arma::mat shadowing_factor(const std::vector<Point2> &ues, double side)
{
    const std::size_t K = ues.size();
    arma::mat C(K, K);
    for (std::size_t i = 0; i < K; i++)
        for (std::size_t j = 0; j <= i; j++)
        {
            const double delta = wrap_distance(ues[i], ues[j], side);
            C(i, j) = C(j, i) = shadowing_covariance(delta, true);
        }

    arma::mat L;
    if (arma::chol(L, C, "lower"))
        return L;
    if (arma::chol(L, C + 1e-12 * arma::eye(K, K), "lower"))
        return L;
    throw std::runtime_error("draw_large_scale: shadowing covariance is not positive semidefinite "
                             "even after diagonal regularization");
}

LargeScaleModel draw_large_scale(const NetworkTopology &topo, const ChannelConfig &cfg, std::uint64_t seed)
{
    const std::size_t M = topo.n_aps();
    const std::size_t Kd = topo.n_dl_ues();
    const std::size_t Ku = topo.n_ul_ues();
    if (M < 1 || Kd + Ku < 1)
        throw std::invalid_argument("draw_large_scale: topology must contain at least one AP and one UE");
    if (!(cfg.rho_t > 0.0))
        throw std::invalid_argument("draw_large_scale: cfg.rho_t must be > 0");

    LargeScaleModel ls;
    ls.tau_t = cfg.tau_t > 0.0 ? cfg.tau_t : static_cast<double>(Kd + Ku);
    ls.tau_c = cfg.tau_c;
    if (ls.tau_t < static_cast<double>(std::max(Kd, Ku)))
        throw std::invalid_argument("draw_large_scale: tau_t must cover orthogonal pilots (tau_t >= max(K_d, K_u))");
    if (!(ls.tau_t < ls.tau_c))
        throw std::invalid_argument("draw_large_scale: tau_t must be smaller than tau_c");

    // Joint list of UE positions; DL UEs first, then UL UEs. The shadowing of
    // links from a common AP is correlated across ALL UEs, so one factor
    // serves both directions.
    std::vector<Point2> ues = topo.dl_ue_positions;
    ues.insert(ues.end(), topo.ul_ue_positions.begin(), topo.ul_ue_positions.end());
    const arma::mat L = shadowing_factor(ues, topo.side_length);

    std::mt19937_64 gen = make_generator(seed, stream_shadowing);
    std::normal_distribution<double> normal(0.0, 1.0);

    ls.beta_dl.set_size(M, Kd);
    ls.beta_ul.set_size(M, Ku);
    for (std::size_t m = 0; m < M; m++)
    {
        arma::vec z(ues.size());
        for (double &v : z)
            v = normal(gen);
        const arma::vec shadow = L * z; // dB, jointly Gaussian per this AP

        for (std::size_t k = 0; k < Kd; k++)
        {
            const double d = clamped_distance(topo.ap_positions[m], topo.dl_ue_positions[k], topo.side_length);
            ls.beta_dl(m, k) = db_to_linear(pathloss_db(d) + shadow(k));
        }
        for (std::size_t l = 0; l < Ku; l++)
        {
            const double d = clamped_distance(topo.ap_positions[m], topo.ul_ue_positions[l], topo.side_length);
            ls.beta_ul(m, l) = db_to_linear(pathloss_db(d) + shadow(Kd + l));
        }
    }

    // UE-to-UE links: independent shadowing (the correlation model only ties
    // links that share an AP).
    const double shadow_std = std::sqrt(shadowing_covariance(0.0, true));
    ls.beta_du.set_size(Kd, Ku);
    for (std::size_t k = 0; k < Kd; k++)
        for (std::size_t l = 0; l < Ku; l++)
        {
            const double d = clamped_distance(topo.dl_ue_positions[k], topo.ul_ue_positions[l], topo.side_length);
            ls.beta_du(k, l) = db_to_linear(pathloss_db(d) + shadow_std * normal(gen));
        }

    // Inter-AP links: same propagation law, independent shadowing per
    // unordered pair, symmetric gains.
    ls.beta_ap.set_size(M, M);
    ls.si_variance.set_size(M);
    ls.si_variance.fill(db_to_linear(cfg.si_over_noise_db));
    for (std::size_t m = 0; m < M; m++)
        ls.beta_ap(m, m) = ls.si_variance(m);
    for (std::size_t m = 0; m < M; m++)
        for (std::size_t i = m + 1; i < M; i++)
        {
            const double d = clamped_distance(topo.ap_positions[m], topo.ap_positions[i], topo.side_length);
            const double beta = db_to_linear(pathloss_db(d) + shadow_std * normal(gen));
            ls.beta_ap(m, i) = ls.beta_ap(i, m) = beta;
        }

    ls.gamma_dl.set_size(M, Kd);
    ls.gamma_ul.set_size(M, Ku);
    if (cfg.perfect_csi)
    {
        ls.gamma_dl = ls.beta_dl;
        ls.gamma_ul = ls.beta_ul;
    }
    else
    {
        for (std::size_t m = 0; m < M; m++)
        {
            for (std::size_t k = 0; k < Kd; k++)
                ls.gamma_dl(m, k) = mmse_gamma(ls.beta_dl(m, k), ls.tau_t, cfg.rho_t);
            for (std::size_t l = 0; l < Ku; l++)
                ls.gamma_ul(m, l) = mmse_gamma(ls.beta_ul(m, l), ls.tau_t, cfg.rho_t);
        }
    }

    return ls;
}

// ----- small-scale draws ----------------------------------------------------

// Fills a matrix with i.i.d. CN(0, variance) entries.
static void fill_cn(arma::cx_mat &A, double variance, std::mt19937_64 &gen, std::normal_distribution<double> &normal)
{
    const double s = std::sqrt(variance / 2.0);
    for (std::size_t j = 0; j < A.n_cols; j++)
        for (std::size_t i = 0; i < A.n_rows; i++)
            A(i, j) = std::complex<double>(s * normal(gen), s * normal(gen));
}

SmallScaleDraw draw_small_scale(const LargeScaleModel &ls, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("draw_small_scale: n must be >= 1");

    const std::size_t M = ls.n_aps();
    const std::size_t Kd = ls.n_dl_ues();
    const std::size_t Ku = ls.n_ul_ues();

    SmallScaleDraw d;
    d.g_dl.resize(M);
    d.ghat_dl.resize(M);
    d.g_ul.resize(M);
    d.ghat_ul.resize(M);

    std::mt19937_64 gen = make_generator(seed, stream_small_scale);
    std::normal_distribution<double> normal(0.0, 1.0);

    arma::cx_mat est(n, 1), err(n, 1);
    for (std::size_t m = 0; m < M; m++)
    {
        d.ghat_dl[m].set_size(n, Kd);
        d.g_dl[m].set_size(n, Kd);
        for (std::size_t k = 0; k < Kd; k++)
        {
            // The estimate and the estimation error are drawn independently
            // with variances gamma and beta - gamma; their sum is the true
            // channel with per-entry variance beta.
            fill_cn(est, ls.gamma_dl(m, k), gen, normal);
            fill_cn(err, std::max(0.0, ls.beta_dl(m, k) - ls.gamma_dl(m, k)), gen, normal);
            d.ghat_dl[m].col(k) = est.col(0);
            d.g_dl[m].col(k) = est.col(0) + err.col(0);
        }
        d.ghat_ul[m].set_size(n, Ku);
        d.g_ul[m].set_size(n, Ku);
        for (std::size_t l = 0; l < Ku; l++)
        {
            fill_cn(est, ls.gamma_ul(m, l), gen, normal);
            fill_cn(err, std::max(0.0, ls.beta_ul(m, l) - ls.gamma_ul(m, l)), gen, normal);
            d.ghat_ul[m].col(l) = est.col(0);
            d.g_ul[m].col(l) = est.col(0) + err.col(0);
        }
    }

    d.h_du.set_size(Kd, Ku);
    for (std::size_t k = 0; k < Kd; k++)
        for (std::size_t l = 0; l < Ku; l++)
        {
            const double s = std::sqrt(ls.beta_du(k, l) / 2.0);
            d.h_du(k, l) = std::complex<double>(s * normal(gen), s * normal(gen));
        }

    d.z_ap.resize(M);
    for (std::size_t m = 0; m < M; m++)
    {
        d.z_ap[m].resize(M);
        for (std::size_t i = 0; i < M; i++)
        {
            d.z_ap[m][i].set_size(n, n);
            fill_cn(d.z_ap[m][i], ls.beta_ap(m, i), gen, normal);
        }
    }

    return d;
}

} // namespace nafd
