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

#include "nafdsim/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace nafd
{

namespace
{

void check_positive(double v, const char *field)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(field) + ": must be positive and finite");
}

void check_nonneg(double v, const char *field)
{
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(field) + ": must be >= 0 and finite");
}

void check_efficiency(double v, const char *field)
{
    if (!(v > 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(field) + ": must be in (0, 1]");
}

// Power drawn by the transmitting (UL) UEs; DL UEs only receive and are
// not modeled.
double ue_power(std::size_t n_ul_ues, const PowerModelParams &p)
{
    return static_cast<double>(n_ul_ues) * (p.p_ue_tx / p.eps_ue + p.p_ue_circuit);
}

} // namespace

void validate_power_model(const PowerModelParams &p)
{
    check_efficiency(p.eps_ap, "power_model.eps_ap");
    check_efficiency(p.eps_ue, "power_model.eps_ue");
    check_efficiency(p.eps_bs, "power_model.eps_bs");
    check_positive(p.p_ap_tx, "power_model.p_ap_tx");
    check_positive(p.p_ue_tx, "power_model.p_ue_tx");
    check_positive(p.p_bs_tx, "power_model.p_bs_tx");
    check_nonneg(p.p_ue_circuit, "power_model.p_ue_circuit");
    check_nonneg(p.p_ap_dyn_tx, "power_model.p_ap_dyn_tx");
    check_nonneg(p.p_ap_dyn_rx, "power_model.p_ap_dyn_rx");
    check_nonneg(p.p_ap_static, "power_model.p_ap_static");
    check_nonneg(p.p_sic, "power_model.p_sic");
    check_nonneg(p.fh_fixed, "power_model.fh_fixed");
    check_nonneg(p.fh_traffic, "power_model.fh_traffic");
    check_positive(p.bandwidth, "power_model.bandwidth");
}

double fronthaul_power(double rate_bps, const PowerModelParams &p)
{
    validate_power_model(p);
    check_nonneg(rate_bps, "fronthaul rate");
    return p.fh_fixed + p.fh_traffic * rate_bps;
}

double ap_circuit_power(std::size_t n_antennas, const PowerModelParams &p)
{
    validate_power_model(p);
    if (n_antennas < 1)
        throw std::invalid_argument("ap_circuit_power: n_antennas must be >= 1");
    return static_cast<double>(n_antennas) * (p.p_ap_dyn_tx + p.p_ap_dyn_rx) + p.p_ap_static;
}

double total_power_hd_cellular(std::size_t n_ul_ues, const PowerModelParams &p)
{
    validate_power_model(p);
    const double chains = static_cast<double>(p.n_bs_tx) * p.p_ap_dyn_tx +
                          static_cast<double>(p.n_bs_rx) * p.p_ap_dyn_rx + p.p_ap_static;
    return ue_power(n_ul_ues, p) + p.p_bs_tx / p.eps_bs + chains;
}

double total_power_fd_cellular(std::size_t n_ul_ues, const PowerModelParams &p)
{
    // Both directions run at once: the half-duplex consumption doubles and
    // every receive chain needs a cancellation stage.
    return 2.0 * total_power_hd_cellular(n_ul_ues, p) + static_cast<double>(p.n_bs_rx) * p.p_sic;
}

double total_power_fd_cellfree(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues, std::size_t n_aps,
                               std::size_t n_antennas, const PowerModelParams &p)
{
    validate_power_model(p);
    check_nonneg(se_dl_sum, "se_dl_sum");
    check_nonneg(se_ul_sum, "se_ul_sum");
    if (n_aps < 1 || n_antennas < 1)
        throw std::invalid_argument("total_power_fd_cellfree: n_aps and n_antennas must be >= 1");
    const double fh = fronthaul_power(p.bandwidth * (se_dl_sum + se_ul_sum), p);
    const double per_ap = p.p_ap_tx / p.eps_ap + ap_circuit_power(n_antennas, p) +
                          static_cast<double>(n_antennas) * p.p_sic + fh;
    return ue_power(n_ul_ues, p) + static_cast<double>(n_aps) * per_ap;
}

double total_power_hd_cellfree(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues, std::size_t n_aps,
                               std::size_t n_antennas, const PowerModelParams &p)
{
    return total_power_fd_cellfree(se_dl_sum, se_ul_sum, n_ul_ues, n_aps, n_antennas, p) -
           static_cast<double>(n_aps) * static_cast<double>(n_antennas) * p.p_sic;
}

double total_power_nafd(double se_dl_sum, double se_ul_sum, std::size_t n_ul_ues,
                        const std::vector<std::uint8_t> &a, const std::vector<std::uint8_t> &b,
                        std::size_t n_antennas, const PowerModelParams &p)
{
    validate_power_model(p);
    check_nonneg(se_dl_sum, "se_dl_sum");
    check_nonneg(se_ul_sum, "se_ul_sum");
    if (a.empty() || a.size() != b.size())
        throw std::invalid_argument("total_power_nafd: mode vectors must be non-empty and equally sized");
    if (n_antennas < 1)
        throw std::invalid_argument("total_power_nafd: n_antennas must be >= 1");

    double total = ue_power(n_ul_ues, p);
    const double rate_dl = p.bandwidth * se_dl_sum;
    const double rate_ul = p.bandwidth * se_ul_sum;
    for (std::size_t m = 0; m < a.size(); m++)
    {
        if (a[m] > 1 || b[m] > 1)
            throw std::invalid_argument("total_power_nafd: mode entries must be binary");
        if (a[m])
            total += p.p_ap_tx / p.eps_ap + ap_circuit_power(n_antennas, p);
        // One fronthaul link per AP; its traffic share carries the aggregate
        // rate of the direction(s) the AP works in.
        total += fronthaul_power(static_cast<double>(a[m]) * rate_dl + static_cast<double>(b[m]) * rate_ul, p);
        if (a[m] && b[m])
            total += static_cast<double>(n_antennas) * p.p_sic;
    }
    return total;
}

double total_power(const SEReport &report, const DuplexAssignment &duplex, std::size_t n_antennas,
                   const PowerModelParams &p)
{
    double se_dl = 0.0, se_ul = 0.0;
    for (const UeTerms &t : report.dl)
        se_dl += t.se;
    for (const UeTerms &t : report.ul)
        se_ul += t.se;
    const std::size_t n_ul_ues = report.ul.size();

    switch (duplex.structure)
    {
    case Structure::NAFD:
        return total_power_nafd(se_dl, se_ul, n_ul_ues, duplex.a, duplex.b, n_antennas, p);
    case Structure::FD:
    case Structure::SMALLCELL:
        return total_power_fd_cellfree(se_dl, se_ul, n_ul_ues, duplex.n_aps(), n_antennas, p);
    case Structure::HD:
        return total_power_hd_cellfree(se_dl, se_ul, n_ul_ues, duplex.n_aps(), n_antennas, p);
    }
    throw std::invalid_argument("total_power: unknown structure");
}

double energy_efficiency(double sum_se, double total_power_w)
{
    if (!(sum_se >= 0.0) || !std::isfinite(sum_se))
        throw std::invalid_argument("energy_efficiency: sum_se must be >= 0 and finite");
    if (!(total_power_w > 0.0) || !std::isfinite(total_power_w))
        throw std::invalid_argument("energy_efficiency: total power must be positive and finite");
    return sum_se / total_power_w;
}

double energy_efficiency_bits_per_joule(double sum_se, double total_power_w, double bandwidth_hz)
{
    check_positive(bandwidth_hz, "bandwidth");
    return bandwidth_hz * energy_efficiency(sum_se, total_power_w);
}

} // namespace nafd
