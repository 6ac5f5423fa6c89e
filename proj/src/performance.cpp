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

#include "nafdsim/performance.hpp"
#include "nafdsim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

namespace nafd
{

std::string structure_name(Structure s)
{
    switch (s)
    {
    case Structure::NAFD:
        return "nafd";
    case Structure::FD:
        return "fd";
    case Structure::HD:
        return "hd";
    case Structure::SMALLCELL:
        return "smallcell";
    }
    return "unknown";
}

DuplexAssignment all_on_duplex(Structure s, std::size_t m, double hd_split)
{
    DuplexAssignment d;
    d.structure = s;
    d.a.assign(m, 1);
    d.b.assign(m, 1);
    d.hd_split = hd_split;
    return d;
}

DuplexAssignment nafd_duplex(const std::vector<std::uint8_t> &a, double hd_split)
{
    DuplexAssignment d;
    d.structure = Structure::NAFD;
    d.a = a;
    d.b.resize(a.size());
    for (std::size_t m = 0; m < a.size(); m++)
        d.b[m] = a[m] ? 0 : 1;
    d.hd_split = hd_split;
    return d;
}

void validate_duplex(const DuplexAssignment &d)
{
    if (d.a.empty() || d.a.size() != d.b.size())
        throw std::invalid_argument("duplex.a/b: empty or mismatched mode vectors");
    for (std::size_t m = 0; m < d.a.size(); m++)
    {
        if (d.a[m] > 1 || d.b[m] > 1)
            throw std::invalid_argument("duplex.a/b: mode entries must be binary");
        if (d.structure == Structure::NAFD && d.a[m] + d.b[m] != 1)
            throw std::invalid_argument("duplex.a/b: NAFD requires a_m + b_m = 1 at every AP");
        if (d.structure != Structure::NAFD && (d.a[m] != 1 || d.b[m] != 1))
            throw std::invalid_argument("duplex.a/b: FD/HD/smallcell require all APs active in both directions");
    }
    if (!(d.hd_split >= 0.0 && d.hd_split <= 1.0))
        throw std::invalid_argument("duplex.hd_split: must be in [0, 1]");
}

// ----- shared evaluation state ----------------------------------------------

namespace
{

struct EvalSetup
{
    std::size_t M = 0, Kd = 0, Ku = 0;
    double N = 0.0;
    double prelog_dl = 0.0, prelog_ul = 0.0;
    bool include_cross = false; // UE-to-UE and AP-to-AP leakage (absent for HD)
};

EvalSetup make_setup(const LargeScaleModel &ls, const GroupingAssignment &grp, const DuplexAssignment &duplex,
                     const PowerAllocation &power)
{
    validate_duplex(duplex);

    EvalSetup s;
    s.M = ls.n_aps();
    s.Kd = ls.n_dl_ues();
    s.Ku = ls.n_ul_ues();
    if (duplex.n_aps() != s.M)
        throw std::invalid_argument("duplex.a: length must equal the AP count of the model");
    if (grp.strong_dl.n_rows != s.M || grp.strong_dl.n_cols != s.Kd || grp.strong_ul.n_rows != s.M ||
        grp.strong_ul.n_cols != s.Ku)
        throw std::invalid_argument("grouping: dimensions do not match the large-scale model");
    if (grp.n_antennas < 1)
        throw std::invalid_argument("grouping.n_antennas: must be >= 1");
    for (std::size_t m = 0; m < s.M; m++)
        if (grp.n_strong_dl(m) >= grp.n_antennas || grp.n_strong_ul(m) >= grp.n_antennas)
            throw std::invalid_argument("grouping: strong sets must leave at least one zero-forcing degree of freedom");
    if (power.theta.n_rows != s.M || power.theta.n_cols != s.Kd)
        throw std::invalid_argument("power.theta: must be M x K_d");
    if (power.varsigma.n_elem != s.Ku)
        throw std::invalid_argument("power.varsigma: must have K_u entries");
    if (power.alpha.n_rows != s.M || power.alpha.n_cols != s.Ku)
        throw std::invalid_argument("power.alpha: must be M x K_u");
    if (!(power.rho_d > 0.0) || !std::isfinite(power.rho_d))
        throw std::invalid_argument("power.rho_d: must be positive and finite");
    if (!(power.rho_u > 0.0) || !std::isfinite(power.rho_u))
        throw std::invalid_argument("power.rho_u: must be positive and finite");
    for (std::size_t l = 0; l < s.Ku; l++)
        if (!(power.varsigma(l) >= 0.0 && power.varsigma(l) <= 1.0))
            throw std::invalid_argument("power.varsigma: entries must be in [0, 1]");
    for (std::size_t m = 0; m < s.M; m++)
        for (std::size_t l = 0; l < s.Ku; l++)
        {
            if (std::abs(power.alpha(m, l)) > 1.0 + 1e-12)
                throw std::invalid_argument("power.alpha: entries must satisfy |alpha| <= 1");
            if (!grp.served_ul(m, l) && power.alpha(m, l) != 0.0)
                throw std::invalid_argument("power.alpha: nonzero weight for an AP that does not serve the UE");
        }

    const double N = static_cast<double>(grp.n_antennas);
    for (std::size_t m = 0; m < s.M; m++)
    {
        double budget = 0.0;
        for (std::size_t k = 0; k < s.Kd; k++)
        {
            const double th = power.theta(m, k);
            if (!(th >= 0.0) || !std::isfinite(th))
                throw std::invalid_argument("power.theta: entries must be finite and >= 0");
            if (!grp.served_dl(m, k) && th != 0.0)
                throw std::invalid_argument("power.theta: nonzero multiplier for an AP that does not serve the UE");
            const double norm =
                grp.strong_dl(m, k) ? ls.gamma_dl(m, k) / grp.zf_margin_dl(m) : N * ls.gamma_dl(m, k);
            budget += th * th * norm;
        }
        if (duplex.a[m] && budget > 1.0 + 1e-6)
            throw std::invalid_argument("power.theta: per-AP expected transmit power exceeds the budget");
    }

    const double overhead = 1.0 - ls.tau_t / ls.tau_c;
    if (!(overhead > 0.0))
        throw std::invalid_argument("large-scale model: pilot overhead leaves no data symbols (tau_t >= tau_c)");
    const bool hd = duplex.structure == Structure::HD;
    s.prelog_dl = overhead * (hd ? duplex.hd_split : 1.0);
    s.prelog_ul = overhead * (hd ? 1.0 - duplex.hd_split : 1.0);
    s.include_cross = !hd;
    s.N = N;
    return s;
}

// Average leakage power coefficient at DL UE k from the stream AP m transmits
// toward DL UE k2 (unit theta). ZF toward a strong UE suppresses everything
// the AP has estimated for its strong set; maximum ratio does not.
double dl_leak_coef(const LargeScaleModel &ls, const GroupingAssignment &grp, std::size_t m, std::size_t k,
                    std::size_t k2, double N)
{
    if (grp.strong_dl(m, k2))
    {
        const double eff_beta = ls.beta_dl(m, k) - (grp.strong_dl(m, k) ? ls.gamma_dl(m, k) : 0.0);
        return ls.gamma_dl(m, k2) * eff_beta / grp.zf_margin_dl(m);
    }
    return N * ls.gamma_dl(m, k2) * ls.beta_dl(m, k);
}

// Mirror for the UL: leakage of UL UE l2's transmission into the combiner AP
// m points at UL UE l (unit varsigma).
double ul_leak_coef(const LargeScaleModel &ls, const GroupingAssignment &grp, std::size_t m, std::size_t l,
                    std::size_t l2, double N)
{
    if (grp.strong_ul(m, l))
    {
        const double eff_beta = ls.beta_ul(m, l2) - (grp.strong_ul(m, l2) ? ls.gamma_ul(m, l2) : 0.0);
        return ls.gamma_ul(m, l) * eff_beta / grp.zf_margin_ul(m);
    }
    return N * ls.gamma_ul(m, l) * ls.beta_ul(m, l2);
}

// Expected squared norm of the combiner AP m uses for UL UE l.
double combiner_norm(const LargeScaleModel &ls, const GroupingAssignment &grp, std::size_t m, std::size_t l, double N)
{
    if (!grp.served_ul(m, l))
        return 0.0;
    return grp.strong_ul(m, l) ? ls.gamma_ul(m, l) / grp.zf_margin_ul(m) : N * ls.gamma_ul(m, l);
}

// Expected transmit power of AP i (theta included): the per-stream precoder
// norms are gamma/(N-|S|) for ZF members and N*gamma for MR members.
double transmit_norm(const LargeScaleModel &ls, const GroupingAssignment &grp, const PowerAllocation &pw,
                     std::size_t i, double N)
{
    double sum = 0.0;
    for (std::size_t q = 0; q < ls.n_dl_ues(); q++)
    {
        const double norm = grp.strong_dl(i, q) ? ls.gamma_dl(i, q) / grp.zf_margin_dl(i) : N * ls.gamma_dl(i, q);
        sum += pw.theta(i, q) * pw.theta(i, q) * norm;
    }
    return sum;
}

double finish_se(UeTerms &t)
{
    t.se = t.denominator() > 0.0 ? t.prelog * std::log2(1.0 + t.sinr()) : 0.0;
    return t.se;
}

} // namespace

// ----- closed forms ---------------------------------------------------------

std::vector<UeTerms> dl_se_closed_form(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                       const DuplexAssignment &duplex, const PowerAllocation &power)
{
    const EvalSetup s = make_setup(ls, grouping, duplex, power);
    std::vector<UeTerms> out(s.Kd);

    for (std::size_t k = 0; k < s.Kd; k++)
    {
        UeTerms t;
        t.prelog = s.prelog_dl;
        t.noise = 1.0;

        double amp = 0.0;
        for (std::size_t m = 0; m < s.M; m++)
        {
            if (!duplex.a[m])
                continue;
            amp += power.theta(m, k) * ls.gamma_dl(m, k) * (grouping.strong_dl(m, k) ? 1.0 : s.N);
            for (std::size_t k2 = 0; k2 < s.Kd; k2++)
            {
                const double p = power.theta(m, k2) * power.theta(m, k2) *
                                 dl_leak_coef(ls, grouping, m, k, k2, s.N);
                (k2 == k ? t.beam_uncertainty : t.multiuser) += p;
            }
        }
        t.desired_power = power.rho_d * amp * amp;
        t.beam_uncertainty *= power.rho_d;
        t.multiuser *= power.rho_d;

        if (s.include_cross)
            for (std::size_t l = 0; l < s.Ku; l++)
                t.cross_link += power.rho_u * power.varsigma(l) * ls.beta_du(k, l);

        finish_se(t);
        out[k] = t;
    }
    return out;
}

std::vector<UeTerms> ul_se_closed_form(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                       const DuplexAssignment &duplex, const PowerAllocation &power)
{
    const EvalSetup s = make_setup(ls, grouping, duplex, power);
    std::vector<UeTerms> out(s.Ku);

    // Per-AP expected transmit power of every DL-active AP (for cross-link
    // terms); independent of the observed UL UE.
    arma::vec tx_norm(s.M, arma::fill::zeros);
    if (s.include_cross)
        for (std::size_t i = 0; i < s.M; i++)
            if (duplex.a[i])
                tx_norm(i) = transmit_norm(ls, grouping, power, i, s.N);

    for (std::size_t l = 0; l < s.Ku; l++)
    {
        UeTerms t;
        t.prelog = s.prelog_ul;

        double amp = 0.0;
        for (std::size_t m = 0; m < s.M; m++)
        {
            if (!duplex.b[m])
                continue;
            const double al = power.alpha(m, l);
            if (grouping.served_ul(m, l))
                amp += al * ls.gamma_ul(m, l) * (grouping.strong_ul(m, l) ? 1.0 : s.N);
            t.noise += al * al * combiner_norm(ls, grouping, m, l, s.N);
            for (std::size_t l2 = 0; l2 < s.Ku; l2++)
            {
                const double p = al * al * power.varsigma(l2) * ul_leak_coef(ls, grouping, m, l, l2, s.N);
                (l2 == l ? t.beam_uncertainty : t.multiuser) += p;
            }
        }
        t.desired_power = power.rho_u * power.varsigma(l) * amp * amp;
        t.beam_uncertainty *= power.rho_u;
        t.multiuser *= power.rho_u;

        if (s.include_cross)
        {
            double cli = 0.0;
            for (std::size_t m = 0; m < s.M; m++)
            {
                if (!duplex.b[m])
                    continue;
                const double rx = power.alpha(m, l) * power.alpha(m, l) * combiner_norm(ls, grouping, m, l, s.N);
                if (rx == 0.0)
                    continue;
                for (std::size_t i = 0; i < s.M; i++)
                {
                    if (!duplex.a[i])
                        continue;
                    // The self-interference strength is stored as received
                    // power over noise at full budget; dividing by rho_d
                    // yields the loop-channel gain this rho_d-scaled term
                    // expects.
                    const double gain = (m == i) ? ls.si_variance(m) / power.rho_d : ls.beta_ap(m, i);
                    cli += rx * gain * tx_norm(i);
                }
            }
            t.cross_link = power.rho_d * cli;
        }

        finish_se(t);
        out[l] = t;
    }
    return out;
}

SEReport closed_form_report(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                            const DuplexAssignment &duplex, const PowerAllocation &power)
{
    SEReport r;
    r.structure = duplex.structure;
    r.dl = dl_se_closed_form(ls, grouping, duplex, power);
    r.ul = ul_se_closed_form(ls, grouping, duplex, power);
    return r;
}

double SEReport::sum_se() const
{
    double s = 0.0;
    for (const UeTerms &t : dl)
        s += t.se;
    for (const UeTerms &t : ul)
        s += t.se;
    return s;
}

double SEReport::min_dl_se() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const UeTerms &t : dl)
        m = std::min(m, t.se);
    return m;
}

double SEReport::min_ul_se() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const UeTerms &t : ul)
        m = std::min(m, t.se);
    return m;
}

// ----- Monte-Carlo oracle ---------------------------------------------------

namespace
{

// Per-draw precoders/combiners for every active AP; columns of unserved UEs
// stay zero.
struct DrawVectors
{
    std::vector<arma::cx_mat> v_dl; // per AP: N x K_d
    std::vector<arma::cx_mat> v_ul; // per AP: N x K_u
};

arma::cx_mat build_direction(const arma::cx_mat &ghat, const arma::umat &strong, const arma::umat &served,
                             const arma::mat &gamma, std::size_t m)
{
    arma::cx_mat v(ghat.n_rows, ghat.n_cols, arma::fill::zeros);

    std::vector<arma::uword> s_idx;
    for (arma::uword k = 0; k < ghat.n_cols; k++)
        if (strong(m, k))
            s_idx.push_back(k);

    if (!s_idx.empty())
    {
        const arma::uvec cols(s_idx);
        const arma::cx_mat G = ghat.cols(cols);
        const arma::cx_mat gram = G.t() * G;
        arma::cx_mat W;
        if (!arma::solve(W, gram, arma::cx_mat(arma::eye<arma::mat>(cols.n_elem, cols.n_elem),
                                               arma::zeros<arma::mat>(cols.n_elem, cols.n_elem)),
                         arma::solve_opts::no_approx))
            throw std::runtime_error("mc_estimate_terms: singular Gram matrix in a zero-forcing draw");
        const arma::cx_mat X = G * W;
        for (arma::uword j = 0; j < cols.n_elem; j++)
            v.col(cols(j)) = gamma(m, cols(j)) * X.col(j);
    }
    for (arma::uword k = 0; k < ghat.n_cols; k++)
        if (served(m, k) && !strong(m, k))
            v.col(k) = ghat.col(k);
    return v;
}

struct BlockAcc
{
    arma::cx_vec mean_c, mean_a; // coherent own-stream sums
    arma::mat pow_c, pow_a;      // |cross-stream|^2 sums, (observed, stream)
    arma::vec udi, noise, cli;

    explicit BlockAcc(std::size_t kd, std::size_t ku)
        : mean_c(kd, arma::fill::zeros), mean_a(ku, arma::fill::zeros), pow_c(kd, kd, arma::fill::zeros),
          pow_a(ku, ku, arma::fill::zeros), udi(kd, arma::fill::zeros), noise(ku, arma::fill::zeros),
          cli(ku, arma::fill::zeros)
    {
    }
};

} // namespace

SEReport mc_estimate_terms(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                           const DuplexAssignment &duplex, const PowerAllocation &power, std::size_t n_draws,
                           std::uint64_t seed, unsigned n_threads)
{
    const EvalSetup s = make_setup(ls, grouping, duplex, power);
    if (n_draws < 1)
        throw std::invalid_argument("mc_estimate_terms: n_draws must be >= 1");
    if (n_threads < 1)
        n_threads = 1;

    const std::size_t n = grouping.n_antennas;
    const double sqrt_rho_d = std::sqrt(power.rho_d);
    const double sqrt_rho_u = std::sqrt(power.rho_u);

    const std::size_t block_size = 128;
    const std::size_t n_blocks = (n_draws + block_size - 1) / block_size;
    std::vector<BlockAcc> blocks(n_blocks, BlockAcc(s.Kd, s.Ku));

    auto run_draw = [&](std::size_t d, BlockAcc &acc) {
        const SmallScaleDraw sd = draw_small_scale(ls, n, derive_seed(seed, stream_small_scale, d));

        DrawVectors dv;
        dv.v_dl.resize(s.M);
        dv.v_ul.resize(s.M);
        for (std::size_t m = 0; m < s.M; m++)
        {
            if (duplex.a[m] && s.Kd > 0)
                dv.v_dl[m] = build_direction(sd.ghat_dl[m], grouping.strong_dl, grouping.served_dl, ls.gamma_dl, m);
            if (duplex.b[m] && s.Ku > 0)
                dv.v_ul[m] = build_direction(sd.ghat_ul[m], grouping.strong_ul, grouping.served_ul, ls.gamma_ul, m);
        }

        // DL side: received coefficient of every transmitted stream at UE k.
        for (std::size_t k = 0; k < s.Kd; k++)
        {
            arma::cx_rowvec c(s.Kd, arma::fill::zeros);
            for (std::size_t m = 0; m < s.M; m++)
            {
                if (!duplex.a[m])
                    continue;
                const arma::cx_rowvec gains = sd.g_dl[m].col(k).t() * dv.v_dl[m]; // 1 x K_d
                for (std::size_t k2 = 0; k2 < s.Kd; k2++)
                    c(k2) += power.theta(m, k2) * gains(k2);
            }
            c *= sqrt_rho_d;
            acc.mean_c(k) += c(k);
            for (std::size_t k2 = 0; k2 < s.Kd; k2++)
                acc.pow_c(k, k2) += std::norm(c(k2));
            if (s.include_cross)
                for (std::size_t l = 0; l < s.Ku; l++)
                    acc.udi(k) += power.rho_u * power.varsigma(l) * std::norm(sd.h_du(k, l));
        }

        // UL side: CPU-combined coefficient of every UL stream, the combiner
        // noise gain, and the power leaking from DL-active APs.
        for (std::size_t l = 0; l < s.Ku; l++)
        {
            arma::cx_rowvec A(s.Ku, arma::fill::zeros);
            for (std::size_t m = 0; m < s.M; m++)
            {
                if (!duplex.b[m])
                    continue;
                const double al = power.alpha(m, l);
                if (al == 0.0)
                    continue;
                const arma::cx_vec u = dv.v_ul[m].col(l);
                const arma::cx_rowvec gains = u.t() * sd.g_ul[m]; // 1 x K_u
                for (std::size_t l2 = 0; l2 < s.Ku; l2++)
                    A(l2) += al * std::sqrt(power.varsigma(l2)) * gains(l2);
                acc.noise(l) += al * al * std::real(arma::cdot(u, u));
            }
            A *= sqrt_rho_u;
            acc.mean_a(l) += A(l);
            for (std::size_t l2 = 0; l2 < s.Ku; l2++)
                acc.pow_a(l, l2) += std::norm(A(l2));

            if (s.include_cross && s.Kd > 0)
            {
                arma::cx_rowvec cq(s.Kd, arma::fill::zeros);
                for (std::size_t m = 0; m < s.M; m++)
                {
                    if (!duplex.b[m])
                        continue;
                    const double al = power.alpha(m, l);
                    if (al == 0.0)
                        continue;
                    const arma::cx_vec u = dv.v_ul[m].col(l);
                    for (std::size_t i = 0; i < s.M; i++)
                    {
                        if (!duplex.a[i])
                            continue;
                        // The self-interference draw is scaled for the full
                        // transmit budget; dividing its amplitude by
                        // sqrt(rho_d) recovers the loop-channel gain before
                        // the common rho_d factor is applied below.
                        const double scale = (i == m) ? al / sqrt_rho_d : al;
                        const arma::cx_rowvec w = (u.t() * sd.z_ap[m][i]) * dv.v_dl[i];
                        for (std::size_t q = 0; q < s.Kd; q++)
                            cq(q) += scale * power.theta(i, q) * w(q);
                    }
                }
                cq *= sqrt_rho_d;
                for (std::size_t q = 0; q < s.Kd; q++)
                    acc.cli(l) += std::norm(cq(q));
            }
        }
    };

    std::atomic<std::size_t> next_block{0};
    auto worker = [&]() {
        for (;;)
        {
            const std::size_t blk = next_block.fetch_add(1);
            if (blk >= n_blocks)
                return;
            const std::size_t lo = blk * block_size;
            const std::size_t hi = std::min(n_draws, lo + block_size);
            for (std::size_t d = lo; d < hi; d++)
                run_draw(d, blocks[blk]);
        }
    };

    if (n_threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; t++)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }

    // Serial reduction in fixed block order: results are independent of the
    // number of worker threads.
    BlockAcc total(s.Kd, s.Ku);
    for (const BlockAcc &b : blocks)
    {
        total.mean_c += b.mean_c;
        total.mean_a += b.mean_a;
        total.pow_c += b.pow_c;
        total.pow_a += b.pow_a;
        total.udi += b.udi;
        total.noise += b.noise;
        total.cli += b.cli;
    }

    const double D = static_cast<double>(n_draws);
    SEReport r;
    r.structure = duplex.structure;
    r.dl.resize(s.Kd);
    r.ul.resize(s.Ku);
    for (std::size_t k = 0; k < s.Kd; k++)
    {
        UeTerms t;
        t.prelog = s.prelog_dl;
        t.noise = 1.0;
        const std::complex<double> mean = total.mean_c(k) / D;
        t.desired_power = std::norm(mean);
        t.beam_uncertainty = std::max(0.0, total.pow_c(k, k) / D - t.desired_power);
        for (std::size_t k2 = 0; k2 < s.Kd; k2++)
            if (k2 != k)
                t.multiuser += total.pow_c(k, k2) / D;
        t.cross_link = total.udi(k) / D;
        finish_se(t);
        r.dl[k] = t;
    }
    for (std::size_t l = 0; l < s.Ku; l++)
    {
        UeTerms t;
        t.prelog = s.prelog_ul;
        const std::complex<double> mean = total.mean_a(l) / D;
        t.desired_power = std::norm(mean);
        t.beam_uncertainty = std::max(0.0, total.pow_a(l, l) / D - t.desired_power);
        for (std::size_t l2 = 0; l2 < s.Ku; l2++)
            if (l2 != l)
                t.multiuser += total.pow_a(l, l2) / D;
        t.noise = total.noise(l) / D;
        t.cross_link = total.cli(l) / D;
        finish_se(t);
        r.ul[l] = t;
    }
    return r;
}

// ----- small cells ----------------------------------------------------------

ServingAssignment strongest_ap_assignment(const LargeScaleModel &ls)
{
    ServingAssignment sa;
    sa.dl_serving_ap.resize(ls.n_dl_ues());
    sa.ul_serving_ap.resize(ls.n_ul_ues());
    for (std::size_t k = 0; k < ls.n_dl_ues(); k++)
    {
        arma::uword best = 0;
        for (arma::uword m = 1; m < ls.n_aps(); m++)
            if (ls.beta_dl(m, k) > ls.beta_dl(best, k))
                best = m;
        sa.dl_serving_ap[k] = best;
    }
    for (std::size_t l = 0; l < ls.n_ul_ues(); l++)
    {
        arma::uword best = 0;
        for (arma::uword m = 1; m < ls.n_aps(); m++)
            if (ls.beta_ul(m, l) > ls.beta_ul(best, l))
                best = m;
        sa.ul_serving_ap[l] = best;
    }
    return sa;
}

GroupingAssignment smallcell_grouping(const LargeScaleModel &ls, const ServingAssignment &serving, double upsilon,
                                      std::size_t n_antennas)
{
    const std::size_t M = ls.n_aps();
    const std::size_t Kd = ls.n_dl_ues();
    const std::size_t Ku = ls.n_ul_ues();
    if (serving.dl_serving_ap.size() != Kd || serving.ul_serving_ap.size() != Ku)
        throw std::invalid_argument("smallcell_grouping: serving assignment must map every UE to one AP");

    GroupingAssignment g;
    g.n_antennas = n_antennas;
    g.strong_dl.zeros(M, Kd);
    g.strong_ul.zeros(M, Ku);
    g.served_dl.zeros(M, Kd);
    g.served_ul.zeros(M, Ku);
    g.n_strong_dl.zeros(M);
    g.n_strong_ul.zeros(M);

    for (std::size_t k = 0; k < Kd; k++)
    {
        if (serving.dl_serving_ap[k] >= M)
            throw std::invalid_argument("smallcell_grouping: DL serving AP index out of range");
        g.served_dl(serving.dl_serving_ap[k], k) = 1;
    }
    for (std::size_t l = 0; l < Ku; l++)
    {
        if (serving.ul_serving_ap[l] >= M)
            throw std::invalid_argument("smallcell_grouping: UL serving AP index out of range");
        g.served_ul(serving.ul_serving_ap[l], l) = 1;
    }

    // Strong/weak split within each cell only.
    for (std::size_t m = 0; m < M; m++)
    {
        std::vector<arma::uword> cell_dl, cell_ul;
        for (arma::uword k = 0; k < Kd; k++)
            if (g.served_dl(m, k))
                cell_dl.push_back(k);
        for (arma::uword l = 0; l < Ku; l++)
            if (g.served_ul(m, l))
                cell_ul.push_back(l);

        if (!cell_dl.empty())
        {
            arma::vec betas(cell_dl.size());
            for (std::size_t j = 0; j < cell_dl.size(); j++)
                betas(j) = ls.beta_dl(m, cell_dl[j]);
            for (const arma::uword j : strong_prefix(betas, upsilon, n_antennas))
                g.strong_dl(m, cell_dl[j]) = 1;
            g.n_strong_dl(m) = arma::accu(g.strong_dl.row(m));
        }
        if (!cell_ul.empty())
        {
            arma::vec betas(cell_ul.size());
            for (std::size_t j = 0; j < cell_ul.size(); j++)
                betas(j) = ls.beta_ul(m, cell_ul[j]);
            for (const arma::uword j : strong_prefix(betas, upsilon, n_antennas))
                g.strong_ul(m, cell_ul[j]) = 1;
            g.n_strong_ul(m) = arma::accu(g.strong_ul.row(m));
        }
    }
    return g;
}

SEReport smallcell_se(const LargeScaleModel &ls, const ServingAssignment &serving, const PowerAllocation &power,
                      double upsilon, std::size_t n_antennas)
{
    const GroupingAssignment grp = smallcell_grouping(ls, serving, upsilon, n_antennas);
    const DuplexAssignment duplex = all_on_duplex(Structure::SMALLCELL, ls.n_aps());
    SEReport r = closed_form_report(ls, grp, duplex, power);
    r.structure = Structure::SMALLCELL;
    return r;
}

// ----- serialization --------------------------------------------------------

std::string se_report_csv(const SEReport &report)
{
    std::string out = "structure,ue_kind,ue_index,se,prelog,desired_power,beam_uncertainty,multiuser,cross_link,noise\n";
    char line[320];
    auto append = [&](const char *kind, std::size_t idx, const UeTerms &t) {
        std::snprintf(line, sizeof(line), "%s,%s,%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      structure_name(report.structure).c_str(), kind, idx, t.se, t.prelog, t.desired_power,
                      t.beam_uncertainty, t.multiuser, t.cross_link, t.noise);
        out += line;
    };
    for (std::size_t k = 0; k < report.dl.size(); k++)
        append("dl", k, report.dl[k]);
    for (std::size_t l = 0; l < report.ul.size(); l++)
        append("ul", l, report.ul[l]);
    return out;
}

} // namespace nafd
