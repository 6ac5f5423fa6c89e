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

#include "nafdsim/precoding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nafd
{

std::vector<arma::uword> GroupingAssignment::strong_dl_indices(std::size_t m) const
{
    std::vector<arma::uword> idx;
    for (arma::uword k = 0; k < strong_dl.n_cols; k++)
        if (strong_dl(m, k))
            idx.push_back(k);
    return idx;
}

std::vector<arma::uword> GroupingAssignment::strong_ul_indices(std::size_t m) const
{
    std::vector<arma::uword> idx;
    for (arma::uword l = 0; l < strong_ul.n_cols; l++)
        if (strong_ul(m, l))
            idx.push_back(l);
    return idx;
}

std::vector<arma::uword> strong_prefix(const arma::vec &betas, double upsilon, std::size_t n_antennas)
{
    if (!(upsilon >= 0.0 && upsilon <= 100.0))
        throw std::invalid_argument("strong_prefix: upsilon must be in [0, 100]");
    if (n_antennas < 1)
        throw std::invalid_argument("strong_prefix: n_antennas must be >= 1");
    for (const double b : betas)
        if (!(b > 0.0) || !std::isfinite(b))
            throw std::invalid_argument("strong_prefix: gains must be positive and finite");

    const std::size_t K = betas.n_elem;
    std::vector<arma::uword> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](arma::uword a, arma::uword b) {
        if (betas(a) != betas(b))
            return betas(a) > betas(b);
        return a < b; // ties: lower UE index counts as stronger
    });

    // Smallest prefix of the sorted gains reaching the requested share of the
    // total. The comparison carries a relative epsilon so that a share of
    // exactly 100 is met by the full set despite rounding in the running sum.
    const double total = arma::accu(betas);
    const double target = total * (upsilon / 100.0) - 1e-12 * total;
    std::size_t prefix = 0;
    double running = 0.0;
    while (running < target && prefix < K)
        running += betas(order[prefix++]);

    // Antenna budget: at most N-1 strong members, keeping the largest gains.
    prefix = std::min(prefix, n_antennas - 1);

    std::vector<arma::uword> members(order.begin(), order.begin() + prefix);
    std::sort(members.begin(), members.end());
    return members;
}

GroupingAssignment group_ues(const LargeScaleModel &ls, double upsilon, std::size_t n_antennas)
{
    const std::size_t M = ls.n_aps();
    const std::size_t Kd = ls.n_dl_ues();
    const std::size_t Ku = ls.n_ul_ues();

    GroupingAssignment g;
    g.n_antennas = n_antennas;
    g.strong_dl.zeros(M, Kd);
    g.strong_ul.zeros(M, Ku);
    g.served_dl.ones(M, Kd);
    g.served_ul.ones(M, Ku);
    g.n_strong_dl.zeros(M);
    g.n_strong_ul.zeros(M);

    for (std::size_t m = 0; m < M; m++)
    {
        if (Kd > 0)
        {
            for (const arma::uword k : strong_prefix(ls.beta_dl.row(m).t(), upsilon, n_antennas))
                g.strong_dl(m, k) = 1;
            g.n_strong_dl(m) = arma::accu(g.strong_dl.row(m));
        }
        if (Ku > 0)
        {
            for (const arma::uword l : strong_prefix(ls.beta_ul.row(m).t(), upsilon, n_antennas))
                g.strong_ul(m, l) = 1;
            g.n_strong_ul(m) = arma::accu(g.strong_ul.row(m));
        }
    }
    return g;
}

double effective_upsilon(PrecodeMode mode, double upsilon)
{
    switch (mode)
    {
    case PrecodeMode::FZF:
        return 100.0;
    case PrecodeMode::MRT:
        return 0.0;
    case PrecodeMode::PZF:
    default:
        return upsilon;
    }
}

arma::cx_vec zf_precoder(const arma::cx_mat &ghat_strong, arma::uword k_col, double gamma_k)
{
    if (ghat_strong.n_cols == 0 || ghat_strong.n_rows == 0)
        throw std::invalid_argument("zf_precoder: empty estimate matrix");
    if (ghat_strong.n_cols > ghat_strong.n_rows)
        throw std::invalid_argument("zf_precoder: more strong UEs than antennas");
    if (k_col >= ghat_strong.n_cols)
        throw std::invalid_argument("zf_precoder: k_col out of range");
    if (!(gamma_k >= 0.0) || !std::isfinite(gamma_k))
        throw std::invalid_argument("zf_precoder: gamma_k must be finite and >= 0");

    const arma::cx_mat gram = ghat_strong.t() * ghat_strong; // |S| x |S|, Hermitian
    arma::cx_vec rhs(ghat_strong.n_cols, arma::fill::zeros);
    rhs(k_col) = 1.0;

    arma::cx_vec w;
    if (!arma::solve(w, gram, rhs, arma::solve_opts::no_approx))
        throw std::runtime_error("zf_precoder: Gram matrix of the strong-set estimates is numerically singular");
    return gamma_k * (ghat_strong * w);
}

arma::cx_vec mrt_precoder(const arma::cx_vec &ghat_k)
{
    return ghat_k;
}

arma::cx_vec ul_combiner(const arma::cx_mat &ghat_strong, arma::uword ell_col, double gamma_ell, CombinerMode mode)
{
    if (mode == CombinerMode::MR)
    {
        if (ell_col >= ghat_strong.n_cols)
            throw std::invalid_argument("ul_combiner: ell_col out of range");
        return mrt_precoder(ghat_strong.col(ell_col));
    }
    return zf_precoder(ghat_strong, ell_col, gamma_ell);
}

} // namespace nafd
