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

#include "nafdsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nafd
{

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

struct ParseContext
{
    const std::string &source;
    std::size_t line = 0;

    [[noreturn]] void fail(const std::string &what) const
    {
        throw config_error(source + ":" + std::to_string(line) + ": " + what);
    }
};

double parse_double(const ParseContext &ctx, const std::string &key, const std::string &value)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument("");
        return v;
    }
    catch (const std::exception &)
    {
        ctx.fail("key '" + key + "' expects a number, got '" + value + "'");
    }
}

std::size_t parse_count(const ParseContext &ctx, const std::string &key, const std::string &value)
{
    try
    {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0)
            throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    }
    catch (const std::exception &)
    {
        ctx.fail("key '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
}

bool parse_bool(const ParseContext &ctx, const std::string &key, const std::string &value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    ctx.fail("key '" + key + "' expects a boolean (true/false), got '" + value + "'");
}

std::vector<std::string> split_list(const std::string &value)
{
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            items.push_back(item);
    }
    return items;
}

std::vector<double> parse_double_list(const ParseContext &ctx, const std::string &key, const std::string &value)
{
    std::vector<double> out;
    for (const std::string &item : split_list(value))
        out.push_back(parse_double(ctx, key, item));
    if (out.empty())
        ctx.fail("key '" + key + "' expects at least one number");
    return out;
}

PrecodeMode parse_precode_mode(const ParseContext &ctx, const std::string &value)
{
    if (value == "pzf")
        return PrecodeMode::PZF;
    if (value == "fzf")
        return PrecodeMode::FZF;
    if (value == "mrt")
        return PrecodeMode::MRT;
    ctx.fail("key 'mode' expects one of pzf, fzf, mrt; got '" + value + "'");
}

Structure parse_structure(const std::string &name)
{
    if (name == "nafd")
        return Structure::NAFD;
    if (name == "fd")
        return Structure::FD;
    if (name == "hd")
        return Structure::HD;
    if (name == "smallcell")
        return Structure::SMALLCELL;
    throw config_error("unknown structure '" + name + "' (expected nafd, fd, hd, or smallcell)");
}

void apply_key(const ParseContext &ctx, ExperimentConfig &cfg, const std::string &section, const std::string &key,
               const std::string &value)
{
    if (section == "topology")
    {
        if (key == "n_aps")
            cfg.topology.n_aps = parse_count(ctx, key, value);
        else if (key == "n_dl_ues")
            cfg.topology.n_dl_ues = parse_count(ctx, key, value);
        else if (key == "n_ul_ues")
            cfg.topology.n_ul_ues = parse_count(ctx, key, value);
        else if (key == "side_length")
            cfg.topology.side_length = parse_double(ctx, key, value);
        else if (key == "min_ap_distance")
            cfg.topology.min_ap_distance = parse_double(ctx, key, value);
        else
            ctx.fail("unknown key '" + key + "' in section [topology]");
    }
    else if (section == "channel")
    {
        if (key == "n_antennas")
            cfg.channel.n_antennas = parse_count(ctx, key, value);
        else if (key == "tau_c")
            cfg.channel.tau_c = parse_double(ctx, key, value);
        else if (key == "tau_t")
            cfg.channel.tau_t = parse_double(ctx, key, value);
        else if (key == "si_over_noise_db")
            cfg.channel.si_over_noise_db = parse_double(ctx, key, value);
        else if (key == "noise_figure_db")
            cfg.noise_figure_db = parse_double(ctx, key, value);
        else if (key == "perfect_csi")
            cfg.channel.perfect_csi = parse_bool(ctx, key, value);
        else if (key == "rho_d_db")
            cfg.rho_d_db = parse_double(ctx, key, value);
        else if (key == "rho_u_db")
            cfg.rho_u_db = parse_double(ctx, key, value);
        else if (key == "rho_t_db")
            cfg.rho_t_db = parse_double(ctx, key, value);
        else
            ctx.fail("unknown key '" + key + "' in section [channel]");
    }
    else if (section == "precoding")
    {
        if (key == "upsilon")
            cfg.upsilon = parse_double(ctx, key, value);
        else if (key == "mode")
            cfg.precode_mode = parse_precode_mode(ctx, value);
        else
            ctx.fail("unknown key '" + key + "' in section [precoding]");
    }
    else if (section == "power")
    {
        if (key == "exponent")
            cfg.power_exponent = parse_double(ctx, key, value);
        else if (key == "hd_split")
            cfg.hd_split = parse_double(ctx, key, value);
        else
            ctx.fail("unknown key '" + key + "' in section [power]");
    }
    else if (section == "energy")
    {
        if (key == "eps_ap")
            cfg.energy.eps_ap = parse_double(ctx, key, value);
        else if (key == "eps_ue")
            cfg.energy.eps_ue = parse_double(ctx, key, value);
        else if (key == "eps_bs")
            cfg.energy.eps_bs = parse_double(ctx, key, value);
        else if (key == "p_ap_tx")
            cfg.energy.p_ap_tx = parse_double(ctx, key, value);
        else if (key == "p_ue_tx")
            cfg.energy.p_ue_tx = parse_double(ctx, key, value);
        else if (key == "p_bs_tx")
            cfg.energy.p_bs_tx = parse_double(ctx, key, value);
        else if (key == "p_ue_circuit")
            cfg.energy.p_ue_circuit = parse_double(ctx, key, value);
        else if (key == "p_ap_dyn_tx")
            cfg.energy.p_ap_dyn_tx = parse_double(ctx, key, value);
        else if (key == "p_ap_dyn_rx")
            cfg.energy.p_ap_dyn_rx = parse_double(ctx, key, value);
        else if (key == "p_ap_static")
            cfg.energy.p_ap_static = parse_double(ctx, key, value);
        else if (key == "p_sic")
            cfg.energy.p_sic = parse_double(ctx, key, value);
        else if (key == "fh_fixed")
            cfg.energy.fh_fixed = parse_double(ctx, key, value);
        else if (key == "fh_traffic_w_per_gbps")
            cfg.energy.fh_traffic = parse_double(ctx, key, value) * 1e-9;
        else if (key == "bandwidth_hz")
            cfg.energy.bandwidth = parse_double(ctx, key, value);
        else if (key == "n_bs_tx")
            cfg.energy.n_bs_tx = parse_count(ctx, key, value);
        else if (key == "n_bs_rx")
            cfg.energy.n_bs_rx = parse_count(ctx, key, value);
        else
            ctx.fail("unknown key '" + key + "' in section [energy]");
    }
    else if (section == "experiment")
    {
        if (key == "n_topologies")
            cfg.n_topologies = parse_count(ctx, key, value);
        else if (key == "qos_grid")
            cfg.qos_grid = parse_double_list(ctx, key, value);
        else if (key == "nafd_solver")
        {
            if (value != "greedy" && value != "exhaustive")
                ctx.fail("key 'nafd_solver' expects greedy or exhaustive, got '" + value + "'");
            cfg.nafd_solver = value;
        }
        else if (key == "structures")
        {
            try
            {
                cfg.structures = parse_structure_list(value);
            }
            catch (const config_error &e)
            {
                ctx.fail(e.what());
            }
        }
        else if (key == "n_fading_draws" || key == "mc_draws")
            cfg.mc_draws = parse_count(ctx, key, value);
        else if (key == "seed")
            cfg.seed = parse_count(ctx, key, value);
        else if (key == "output")
            cfg.output_dir = value;
        else
            ctx.fail("unknown key '" + key + "' in section [experiment]");
    }
    else
        ctx.fail("unknown section [" + section + "]");
}

// Normalized SNR from a transmit power and the thermal noise floor:
// P[dBm] - (-174 dBm/Hz + 10 log10(B) + NF).
double budget_db(double tx_power_w, double bandwidth_hz, double noise_figure_db)
{
    const double tx_dbm = 10.0 * std::log10(tx_power_w * 1e3);
    const double noise_dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return tx_dbm - noise_dbm;
}

} // namespace

std::vector<Structure> parse_structure_list(const std::string &text)
{
    std::vector<Structure> out;
    for (const std::string &item : split_list(text))
        out.push_back(parse_structure(item));
    if (out.empty())
        throw config_error("structure list is empty");
    return out;
}

void finalize_config(ExperimentConfig &cfg)
{
    const double ap_db = budget_db(cfg.energy.p_ap_tx, cfg.energy.bandwidth, cfg.noise_figure_db);
    const double ue_db = budget_db(cfg.energy.p_ue_tx, cfg.energy.bandwidth, cfg.noise_figure_db);
    const double rho_d_db = std::isnan(cfg.rho_d_db) ? ap_db : cfg.rho_d_db;
    const double rho_u_db = std::isnan(cfg.rho_u_db) ? ue_db : cfg.rho_u_db;
    const double rho_t_db = std::isnan(cfg.rho_t_db) ? rho_u_db : cfg.rho_t_db;
    cfg.channel.rho_d = std::pow(10.0, rho_d_db / 10.0);
    cfg.channel.rho_u = std::pow(10.0, rho_u_db / 10.0);
    cfg.channel.rho_t = std::pow(10.0, rho_t_db / 10.0);
}

ExperimentConfig parse_config(const std::string &text, const std::string &source_name)
{
    ExperimentConfig cfg;
    ParseContext ctx{source_name, 0};
    std::string section;

    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw))
    {
        ctx.line++;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']' || line.size() < 3)
                ctx.fail("malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            static const char *known[] = {"topology", "channel", "precoding", "power", "energy", "experiment"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                ctx.fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            ctx.fail("expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            ctx.fail("empty key");
        if (section.empty())
            ctx.fail("key '" + key + "' appears before any [section] header");
        apply_key(ctx, cfg, section, key, value);
    }

    finalize_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error(path + ": cannot open configuration file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

} // namespace nafd
