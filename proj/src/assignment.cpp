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

#include "nafdsim/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nafd
{

QosResult check_qos(const SEReport &report, const QosSpec &qos)
{
    if (!std::isfinite(qos.qos_dl) || qos.qos_dl < 0.0 || !std::isfinite(qos.qos_ul) || qos.qos_ul < 0.0)
        throw std::invalid_argument("check_qos: qos floors must be finite and >= 0");
    double worst = std::numeric_limits<double>::infinity();
    for (const UeTerms &t : report.dl)
        worst = std::min(worst, t.se - qos.qos_dl);
    for (const UeTerms &t : report.ul)
        worst = std::min(worst, t.se - qos.qos_ul);
    QosResult r;
    r.slack = worst;
    r.feasible = r.slack >= 0.0;
    return r;
}

QosResult check_qos(const SEReport &report, double qos)
{
    return check_qos(report, QosSpec(qos));
}

PowerAllocation power_rule_fractional(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                                      const DuplexAssignment &duplex, double exponent, double rho_d, double rho_u)
{
    if (!(exponent >= -1.0 && exponent <= 1.0))
        throw std::invalid_argument("power_rule_fractional: exponent must be in [-1, 1]");
    validate_duplex(duplex);
    const std::size_t M = ls.n_aps();
    const std::size_t Kd = ls.n_dl_ues();
    const std::size_t Ku = ls.n_ul_ues();
    if (duplex.n_aps() != M || grouping.strong_dl.n_rows != M || grouping.strong_dl.n_cols != Kd)
        throw std::invalid_argument("power_rule_fractional: dimensions do not match the large-scale model");

    PowerAllocation pw;
    pw.rho_d = rho_d;
    pw.rho_u = rho_u;
    pw.theta.zeros(M, Kd);
    pw.varsigma.ones(Ku);
    pw.alpha.zeros(M, Ku);

    const double N = static_cast<double>(grouping.n_antennas);
    for (std::size_t m = 0; m < M; m++)
    {
        if (duplex.b[m])
            for (std::size_t l = 0; l < Ku; l++)
                if (grouping.served_ul(m, l))
                    pw.alpha(m, l) = 1.0;
        if (!duplex.a[m])
            continue;
        // theta_mk = c_m * gamma_mk^exponent over the served UEs, with c_m
        // chosen so the expected transmit power meets the budget exactly.
        double budget = 0.0;
        for (std::size_t k = 0; k < Kd; k++)
        {
            if (!grouping.served_dl(m, k))
                continue;
            const double g = ls.gamma_dl(m, k);
            const double mult = std::pow(g, exponent);
            const double norm = grouping.strong_dl(m, k) ? g / grouping.zf_margin_dl(m) : N * g;
            pw.theta(m, k) = mult;
            budget += mult * mult * norm;
        }
        if (budget > 0.0)
            pw.theta.row(m) /= std::sqrt(budget);
    }
    return pw;
}

EvaluationResult evaluate_architecture(const LargeScaleModel &ls, const DuplexAssignment &duplex,
                                       const ModeSelectConfig &cfg)
{
    EvaluationResult r;
    r.duplex = duplex;
    const GroupingAssignment grouping = group_ues(ls, effective_upsilon(PrecodeMode::PZF, cfg.upsilon),
                                                  cfg.n_antennas);
    r.power = power_rule_fractional(ls, grouping, duplex, cfg.power_exponent, cfg.rho_d, cfg.rho_u);
    r.report = closed_form_report(ls, grouping, duplex, r.power);
    const double p = total_power(r.report, duplex, cfg.n_antennas, cfg.power_model);
    r.ee = energy_efficiency(r.report.sum_se(), p);
    const QosResult q = check_qos(r.report, cfg.qos);
    r.feasible = q.feasible;
    r.slack = q.slack;
    r.n_evaluated = 1;
    return r;
}

namespace
{

// Strictly-better relation of the search: feasibility first, then EE among
// feasible candidates, then slack among infeasible ones.
bool better(const EvaluationResult &cand, const EvaluationResult &best)
{
    if (cand.feasible != best.feasible)
        return cand.feasible;
    if (cand.feasible)
        return cand.ee > best.ee;
    return cand.slack > best.slack;
}

} // namespace

EvaluationResult exhaustive_mode_select(const LargeScaleModel &ls, const ModeSelectConfig &cfg)
{
    const std::size_t M = ls.n_aps();
    if (M > cfg.max_exhaustive_aps)
        throw std::invalid_argument("exhaustive_mode_select: AP count exceeds the enumeration limit");

    EvaluationResult best;
    bool have_best = false;
    std::size_t evaluated = 0;
    const std::size_t n_masks = static_cast<std::size_t>(1) << M;
    for (std::size_t mask = 0; mask < n_masks; mask++)
    {
        // Increasing mask with AP 0 in the top bit walks the DL-mode vectors
        // in lexicographic order, so the first optimum found is the
        // lexicographically smallest.
        std::vector<std::uint8_t> a(M);
        for (std::size_t m = 0; m < M; m++)
            a[m] = static_cast<std::uint8_t>((mask >> (M - 1 - m)) & 1u);
        EvaluationResult cand = evaluate_architecture(ls, nafd_duplex(a), cfg);
        evaluated++;
        if (!have_best || better(cand, best))
        {
            best = std::move(cand);
            have_best = true;
        }
    }
    best.n_evaluated = evaluated;
    return best;
}

EvaluationResult greedy_mode_select(const LargeScaleModel &ls, const ModeSelectConfig &cfg)
{
    const std::size_t M = ls.n_aps();

    // Start with every AP serving the direction whose aggregate large-scale
    // gain is larger across the network.
    const double sum_dl = arma::accu(ls.beta_dl);
    const double sum_ul = arma::accu(ls.beta_ul);
    std::vector<std::uint8_t> a(M, sum_dl >= sum_ul ? 1 : 0);

    EvaluationResult best = evaluate_architecture(ls, nafd_duplex(a), cfg);
    std::size_t evaluated = 1;

    for (;;)
    {
        EvaluationResult best_flip;
        std::size_t flip_ap = M;
        for (std::size_t m = 0; m < M; m++)
        {
            a[m] ^= 1;
            EvaluationResult cand = evaluate_architecture(ls, nafd_duplex(a), cfg);
            a[m] ^= 1;
            evaluated++;
            if (better(cand, best) && (flip_ap == M || better(cand, best_flip)))
            {
                best_flip = std::move(cand);
                flip_ap = m;
            }
        }
        if (flip_ap == M)
            break;
        a[flip_ap] ^= 1;
        best = std::move(best_flip);
    }
    best.n_evaluated = evaluated;
    return best;
}

} // namespace nafd
