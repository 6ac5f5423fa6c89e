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

#include "nafdsim/experiment.hpp"
#include "nafdsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nafd
{

namespace
{

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

ModeSelectConfig make_mode_config(const ExperimentConfig &cfg, double qos)
{
    ModeSelectConfig ms;
    ms.upsilon = effective_upsilon(cfg.precode_mode, cfg.upsilon);
    ms.n_antennas = cfg.channel.n_antennas;
    ms.qos = qos;
    ms.power_exponent = cfg.power_exponent;
    ms.rho_d = cfg.channel.rho_d;
    ms.rho_u = cfg.channel.rho_u;
    ms.power_model = cfg.energy;
    return ms;
}

// Small cells pick one serving AP per UE; grouping, power rule, and the
// consumption model then follow the shared paths.
EvaluationResult evaluate_smallcell(const LargeScaleModel &ls, const ModeSelectConfig &ms)
{
    EvaluationResult r;
    r.duplex = all_on_duplex(Structure::SMALLCELL, ls.n_aps());
    const ServingAssignment serving = strongest_ap_assignment(ls);
    const GroupingAssignment grouping = smallcell_grouping(ls, serving, ms.upsilon, ms.n_antennas);
    r.power = power_rule_fractional(ls, grouping, r.duplex, ms.power_exponent, ms.rho_d, ms.rho_u);
    r.report = closed_form_report(ls, grouping, r.duplex, r.power);
    r.report.structure = Structure::SMALLCELL;
    r.ee = energy_efficiency(r.report.sum_se(), total_power(r.report, r.duplex, ms.n_antennas, ms.power_model));
    const QosResult q = check_qos(r.report, ms.qos);
    r.feasible = q.feasible;
    r.slack = q.slack;
    r.n_evaluated = 1;
    return r;
}

EvaluationResult evaluate_structure(const LargeScaleModel &ls, Structure s, const ModeSelectConfig &ms,
                                    const ExperimentConfig &cfg)
{
    switch (s)
    {
    case Structure::NAFD:
        return cfg.nafd_solver == "exhaustive" ? exhaustive_mode_select(ls, ms) : greedy_mode_select(ls, ms);
    case Structure::FD:
        return evaluate_architecture(ls, all_on_duplex(Structure::FD, ls.n_aps()), ms);
    case Structure::HD:
        return evaluate_architecture(ls, all_on_duplex(Structure::HD, ls.n_aps(), cfg.hd_split), ms);
    case Structure::SMALLCELL:
        return evaluate_smallcell(ls, ms);
    }
    throw std::invalid_argument("evaluate_structure: unknown structure");
}

} // namespace

ExperimentOutput run_experiment(const ExperimentConfig &cfg, std::uint64_t seed)
{
    if (cfg.n_topologies < 1)
        throw std::invalid_argument("experiment.n_topologies: must be >= 1");
    if (cfg.qos_grid.empty())
        throw std::invalid_argument("experiment.qos_grid: must not be empty");
    if (cfg.structures.empty())
        throw std::invalid_argument("experiment.structures: must not be empty");

    struct Cell
    {
        std::size_t n = 0, n_feasible = 0;
        double sum_ee = 0.0, sum_ee_feasible = 0.0;
        double sum_se = 0.0, sum_min_dl = 0.0, sum_min_ul = 0.0;
    };
    const std::size_t n_cells = cfg.structures.size() * cfg.qos_grid.size();
    std::vector<Cell> cells(n_cells);

    ExperimentOutput out;
    out.topology_csv = "topology,kind,index,x,y\n";
    out.per_topology_csv =
        "topology,structure,qos,feasible,slack,ee,sum_se,min_dl_se,min_ul_se,n_dl_aps,n_ul_aps,n_evaluated\n";

    for (std::size_t t = 0; t < cfg.n_topologies; t++)
    {
        const std::uint64_t topo_seed = derive_seed(seed, stream_topology_sweep, t);
        NetworkTopology topo;
        try
        {
            topo = generate_topology(cfg.topology, topo_seed);
        }
        catch (const std::runtime_error &e)
        {
            throw std::runtime_error(std::string(e.what()) + " (topology " + std::to_string(t) + ", seed " +
                                     std::to_string(topo_seed) + ")");
        }
        const LargeScaleModel ls = draw_large_scale(topo, cfg.channel, topo_seed);

        auto emit_nodes = [&](const char *kind, const std::vector<Point2> &pts) {
            for (std::size_t i = 0; i < pts.size(); i++)
                out.topology_csv += std::to_string(t) + "," + kind + "," + std::to_string(i) + "," +
                                    num(pts[i].x) + "," + num(pts[i].y) + "\n";
        };
        emit_nodes("ap", topo.ap_positions);
        emit_nodes("dl_ue", topo.dl_ue_positions);
        emit_nodes("ul_ue", topo.ul_ue_positions);

        for (std::size_t si = 0; si < cfg.structures.size(); si++)
        {
            for (std::size_t qi = 0; qi < cfg.qos_grid.size(); qi++)
            {
                const double qos = cfg.qos_grid[qi];
                const EvaluationResult r =
                    evaluate_structure(ls, cfg.structures[si], make_mode_config(cfg, qos), cfg);

                std::size_t n_dl_aps = 0, n_ul_aps = 0;
                for (std::size_t m = 0; m < r.duplex.n_aps(); m++)
                {
                    n_dl_aps += r.duplex.a[m];
                    n_ul_aps += r.duplex.b[m];
                }

                Cell &c = cells[si * cfg.qos_grid.size() + qi];
                c.n++;
                c.sum_ee += r.ee;
                c.sum_se += r.report.sum_se();
                c.sum_min_dl += r.report.min_dl_se();
                c.sum_min_ul += r.report.min_ul_se();
                if (r.feasible)
                {
                    c.n_feasible++;
                    c.sum_ee_feasible += r.ee;
                }

                out.per_topology_csv += std::to_string(t) + "," + structure_name(cfg.structures[si]) + "," +
                                        num(qos) + "," + (r.feasible ? "1" : "0") + "," + num(r.slack) + "," +
                                        num(r.ee) + "," + num(r.report.sum_se()) + "," +
                                        num(r.report.min_dl_se()) + "," + num(r.report.min_ul_se()) + "," +
                                        std::to_string(n_dl_aps) + "," + std::to_string(n_ul_aps) + "," +
                                        std::to_string(r.n_evaluated) + "\n";
            }
        }
    }

    out.summary_csv = "structure,qos,n_topologies,feasibility_rate,mean_ee,mean_ee_feasible,mean_sum_se,"
                      "mean_min_dl_se,mean_min_ul_se\n";
    for (std::size_t si = 0; si < cfg.structures.size(); si++)
    {
        for (std::size_t qi = 0; qi < cfg.qos_grid.size(); qi++)
        {
            const Cell &c = cells[si * cfg.qos_grid.size() + qi];
            SweepSummary s;
            s.structure = cfg.structures[si];
            s.qos = cfg.qos_grid[qi];
            s.n_topologies = c.n;
            const double n = static_cast<double>(c.n);
            s.feasibility_rate = c.n_feasible / n;
            s.mean_ee = c.sum_ee / n;
            s.mean_ee_feasible = c.n_feasible > 0 ? c.sum_ee_feasible / static_cast<double>(c.n_feasible)
                                                  : std::numeric_limits<double>::quiet_NaN();
            s.mean_sum_se = c.sum_se / n;
            s.mean_min_dl_se = c.sum_min_dl / n;
            s.mean_min_ul_se = c.sum_min_ul / n;
            out.summaries.push_back(s);

            out.summary_csv += structure_name(s.structure) + "," + num(s.qos) + "," + std::to_string(c.n) + "," +
                               num(s.feasibility_rate) + "," + num(s.mean_ee) + "," + num(s.mean_ee_feasible) +
                               "," + num(s.mean_sum_se) + "," + num(s.mean_min_dl_se) + "," +
                               num(s.mean_min_ul_se) + "\n";
        }
    }

    // (x, y) series per curve, one curve per structure, for external plotting.
    out.plot_csv = "metric,curve,x,y\n";
    const struct
    {
        const char *name;
        double SweepSummary::*field;
    } plot_metrics[] = {
        {"feasibility_rate", &SweepSummary::feasibility_rate},
        {"mean_ee", &SweepSummary::mean_ee},
        {"mean_sum_se", &SweepSummary::mean_sum_se},
    };
    for (const auto &metric : plot_metrics)
        for (const SweepSummary &s : out.summaries)
            out.plot_csv += std::string(metric.name) + "," + structure_name(s.structure) + "," + num(s.qos) + "," +
                            num(s.*metric.field) + "\n";
    return out;
}

// ----- closed-form vs Monte-Carlo cross-check -------------------------------

namespace
{

struct ValidationCase
{
    Structure structure;
    double upsilon;
    bool perfect_csi;
};

void compare_terms(ValidationOutput &out, const ValidationCase &vc, const char *kind, std::size_t index,
                   const UeTerms &cf, const UeTerms &mc)
{
    // A term whose magnitude is negligible against the UE's dominant term is
    // only required to be negligible on both routes (exact-zero handling);
    // every other term must match within its relative tolerance.
    const double scale = std::max({std::abs(cf.desired_power), std::abs(cf.beam_uncertainty),
                                   std::abs(cf.multiuser), std::abs(cf.cross_link), std::abs(cf.noise)});
    const double floor = 1e-9 * scale;

    const struct
    {
        const char *name;
        double cf_v, mc_v, tol;
    } terms[] = {
        {"desired_power", cf.desired_power, mc.desired_power, 0.02},
        {"beam_uncertainty", cf.beam_uncertainty, mc.beam_uncertainty, 0.05},
        {"multiuser", cf.multiuser, mc.multiuser, 0.05},
        {"cross_link", cf.cross_link, mc.cross_link, 0.05},
        {"noise", cf.noise, mc.noise, 0.05},
    };
    for (const auto &term : terms)
    {
        ValidationRow row;
        row.structure = vc.structure;
        row.upsilon = vc.upsilon;
        row.perfect_csi = vc.perfect_csi;
        row.ue_kind = kind;
        row.ue_index = index;
        row.term = term.name;
        row.closed_form = term.cf_v;
        row.monte_carlo = term.mc_v;
        row.tolerance = term.tol;
        if (std::abs(term.cf_v) <= floor && std::abs(term.mc_v) <= floor)
            row.pass = true;
        else
            row.pass = std::abs(term.cf_v - term.mc_v) <=
                       term.tol * std::max(std::abs(term.cf_v), std::abs(term.mc_v));
        if (!row.pass)
            out.n_failures++;
        out.rows.push_back(row);
    }
}

} // namespace

ValidationOutput run_validation(const ExperimentConfig &cfg, std::uint64_t seed, unsigned n_threads)
{
    const std::uint64_t topo_seed = derive_seed(seed, stream_topology_sweep, 0);
    const NetworkTopology topo = generate_topology(cfg.topology, topo_seed);
    const LargeScaleModel ls = draw_large_scale(topo, cfg.channel, topo_seed);

    ChannelConfig perfect = cfg.channel;
    perfect.perfect_csi = true;
    const LargeScaleModel ls_perfect = draw_large_scale(topo, perfect, topo_seed);

    // DL/UL mode pattern used for the NAFD cases: alternate over the APs.
    std::vector<std::uint8_t> alternating(ls.n_aps());
    for (std::size_t m = 0; m < alternating.size(); m++)
        alternating[m] = (m % 2 == 0) ? 1 : 0;

    std::vector<ValidationCase> cases;
    for (const Structure s : cfg.structures)
    {
        if (s == Structure::SMALLCELL)
            continue; // evaluated through the same core as the others
        for (const double upsilon : {0.0, 50.0, 100.0})
            cases.push_back({s, upsilon, false});
        cases.push_back({s, 100.0, true});
    }
    if (cases.empty())
        throw std::invalid_argument("run_validation: no validatable structure configured");

    ValidationOutput out;
    out.csv = "structure,upsilon,perfect_csi,ue_kind,ue_index,term,closed_form,monte_carlo,tolerance,pass\n";

    for (std::size_t ci = 0; ci < cases.size(); ci++)
    {
        const ValidationCase &vc = cases[ci];
        const LargeScaleModel &model = vc.perfect_csi ? ls_perfect : ls;
        const DuplexAssignment duplex = vc.structure == Structure::NAFD
                                            ? nafd_duplex(alternating, cfg.hd_split)
                                            : all_on_duplex(vc.structure, model.n_aps(), cfg.hd_split);
        const GroupingAssignment grouping = group_ues(model, vc.upsilon, cfg.channel.n_antennas);
        const PowerAllocation power = power_rule_fractional(model, grouping, duplex, cfg.power_exponent,
                                                            cfg.channel.rho_d, cfg.channel.rho_u);
        const SEReport cf = closed_form_report(model, grouping, duplex, power);
        const SEReport mc = mc_estimate_terms(model, grouping, duplex, power, cfg.mc_draws,
                                              derive_seed(seed, stream_test, ci), n_threads);

        for (std::size_t k = 0; k < cf.dl.size(); k++)
            compare_terms(out, vc, "dl", k, cf.dl[k], mc.dl[k]);
        for (std::size_t l = 0; l < cf.ul.size(); l++)
            compare_terms(out, vc, "ul", l, cf.ul[l], mc.ul[l]);
    }

    for (const ValidationRow &row : out.rows)
        out.csv += structure_name(row.structure) + "," + num(row.upsilon) + "," + (row.perfect_csi ? "1" : "0") +
                   "," + row.ue_kind + "," + std::to_string(row.ue_index) + "," + row.term + "," +
                   num(row.closed_form) + "," + num(row.monte_carlo) + "," + num(row.tolerance) + "," +
                   (row.pass ? "1" : "0") + "\n";
    return out;
}

void write_output_file(const std::string &dir, const std::string &name, const std::string &content)
{
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open output file " + path.string());
    f << content;
    f.flush();
    if (!f)
        throw std::runtime_error("failed writing output file " + path.string());
}

} // namespace nafd
