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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace nafd
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

// Network geometry on a wrap-around (torus) square. All link distances in the
// simulator use the torus metric so the layout has no boundary effects.
struct NetworkTopology
{
    double side_length = 0.0;            // meters
    std::vector<Point2> ap_positions;    // length M
    std::vector<Point2> dl_ue_positions; // length K_d
    std::vector<Point2> ul_ue_positions; // length K_u

    std::size_t n_aps() const { return ap_positions.size(); }
    std::size_t n_dl_ues() const { return dl_ue_positions.size(); }
    std::size_t n_ul_ues() const { return ul_ue_positions.size(); }
};

struct TopologyConfig
{
    std::size_t n_aps = 40;
    std::size_t n_dl_ues = 4;
    std::size_t n_ul_ues = 4;
    double side_length = 500.0;    // meters
    double min_ap_distance = 50.0; // meters, pairwise wrap-around distance
};

// Torus metric: per-axis displacement is folded to at most side/2.
// Throws std::invalid_argument on non-finite coordinates or side <= 0.
double wrap_distance(const Point2 &p, const Point2 &q, double side);

// Places APs uniformly at random subject to the pairwise minimum-distance
// constraint (dart throwing with full restarts), then UEs uniformly i.i.d.
// Deterministic for a given seed. Throws std::runtime_error when the
// constraint cannot be met within the retry budget.
NetworkTopology generate_topology(const TopologyConfig &cfg, std::uint64_t seed);

// Plain-text table for reproducibility audits: one row per node
// "kind index x y" with kind in {ap, dl_ue, ul_ue}.
std::string topology_table(const NetworkTopology &topo);

} // namespace nafd
