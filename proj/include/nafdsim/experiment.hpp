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

#include "nafdsim/assignment.hpp"
#include "nafdsim/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nafd
{

// Aggregate outcome of one (structure, QoS floor) cell of the sweep.
struct SweepSummary
{
    Structure structure = Structure::NAFD;
    double qos = 0.0;
    std::size_t n_topologies = 0;
    double feasibility_rate = 0.0;
    double mean_ee = 0.0;          // over all topologies
    double mean_ee_feasible = 0.0; // over feasible topologies only (NaN if none)
    double mean_sum_se = 0.0;
    double mean_min_dl_se = 0.0;
    double mean_min_ul_se = 0.0;
};

// Full result of an experiment run: the aggregate table plus the rendered
// CSV exports. The text is byte-reproducible for a given configuration and
// seed.
struct ExperimentOutput
{
    std::vector<SweepSummary> summaries;
    std::string summary_csv;      // one row per (structure, qos)
    std::string per_topology_csv; // one row per (topology, structure, qos)
    std::string topology_csv;     // node positions of every generated layout
    std::string plot_csv;         // (metric, curve, x, y) series for external plotting
};

// Generates n_topologies random layouts and, for every configured structure
// and QoS floor, selects duplex modes (NAFD only), applies the power rule,
// and records spectral efficiency, feasibility, and energy efficiency.
ExperimentOutput run_experiment(const ExperimentConfig &cfg, std::uint64_t seed);

// One term-level comparison between the closed-form evaluator and the
// Monte-Carlo estimate.
struct ValidationRow
{
    Structure structure = Structure::NAFD;
    double upsilon = 0.0;
    bool perfect_csi = false;
    std::string ue_kind; // "dl" | "ul"
    std::size_t ue_index = 0;
    std::string term;
    double closed_form = 0.0;
    double monte_carlo = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationOutput
{
    std::vector<ValidationRow> rows;
    std::string csv;
    std::size_t n_failures = 0;
    bool all_pass() const { return n_failures == 0; }
};

// Cross-checks every closed-form term against the Monte-Carlo estimator on
// one random layout, sweeping the strong-group threshold over pure
// maximum-ratio, mixed, and pure zero-forcing operation for each configured
// structure, plus a perfect-CSI zero-forcing case per structure.
ValidationOutput run_validation(const ExperimentConfig &cfg, std::uint64_t seed, unsigned n_threads);

// Writes content to dir/name, creating dir if needed; throws
// std::runtime_error on I/O failure.
void write_output_file(const std::string &dir, const std::string &name, const std::string &content);

} // namespace nafd
