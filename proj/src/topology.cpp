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

#include "nafdsim/topology.hpp"
#include "nafdsim/rng.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nafd
{

double wrap_distance(const Point2 &p, const Point2 &q, double side)
{
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(q.x) || !std::isfinite(q.y))
        throw std::invalid_argument("wrap_distance: non-finite coordinates");
    if (!(side > 0.0))
        throw std::invalid_argument("wrap_distance: side must be positive");

    double dx = std::abs(p.x - q.x);
    double dy = std::abs(p.y - q.y);
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
    return std::hypot(dx, dy);
}

static Point2 draw_point(std::mt19937_64 &gen, double side)
{
    // uniform over [0, side) per axis
    std::uniform_real_distribution<double> u(0.0, side);
    Point2 p;
    p.x = u(gen);
    p.y = u(gen);
    return p;
}

NetworkTopology generate_topology(const TopologyConfig &cfg, std::uint64_t seed)
{
    if (cfg.n_aps < 1)
        throw std::invalid_argument("generate_topology: at least one AP required");
    if (cfg.n_dl_ues + cfg.n_ul_ues < 1)
        throw std::invalid_argument("generate_topology: at least one UE required");
    if (!(cfg.side_length > 0.0))
        throw std::invalid_argument("generate_topology: side_length must be positive");
    if (cfg.min_ap_distance < 0.0 || !std::isfinite(cfg.min_ap_distance))
        throw std::invalid_argument("generate_topology: min_ap_distance must be finite and >= 0");

    NetworkTopology topo;
    topo.side_length = cfg.side_length;

    // AP placement: sequential dart throwing. Each AP is redrawn until it
    // clears the pairwise minimum distance; if a single AP exhausts its draw
    // budget the whole layout is restarted from scratch (up to 1e4 restarts)
    // so the accepted layout stays unbiased by partial failures.
    const int max_restarts = 10000;
    const int draws_per_ap = 100;

    std::mt19937_64 gen = make_generator(seed, stream_ap_placement);
    bool placed = false;
    for (int restart = 0; restart < max_restarts && !placed; restart++)
    {
        topo.ap_positions.clear();
        bool failed = false;
        for (std::size_t m = 0; m < cfg.n_aps && !failed; m++)
        {
            bool ok = false;
            for (int attempt = 0; attempt < draws_per_ap; attempt++)
            {
                Point2 cand = draw_point(gen, cfg.side_length);
                ok = true;
                for (const Point2 &prev : topo.ap_positions)
                    if (wrap_distance(cand, prev, cfg.side_length) < cfg.min_ap_distance)
                    {
                        ok = false;
                        break;
                    }
                if (ok)
                {
                    topo.ap_positions.push_back(cand);
                    break;
                }
            }
            failed = !ok;
        }
        placed = !failed;
    }
    if (!placed)
        throw std::runtime_error("generate_topology: could not satisfy the pairwise minimum AP distance of " +
                                 std::to_string(cfg.min_ap_distance) + " m within the retry budget; " +
                                 "reduce n_aps or min_ap_distance");

    std::mt19937_64 ue_gen = make_generator(seed, stream_ue_placement);
    for (std::size_t k = 0; k < cfg.n_dl_ues; k++)
        topo.dl_ue_positions.push_back(draw_point(ue_gen, cfg.side_length));
    for (std::size_t l = 0; l < cfg.n_ul_ues; l++)
        topo.ul_ue_positions.push_back(draw_point(ue_gen, cfg.side_length));

    return topo;
}

std::string topology_table(const NetworkTopology &topo)
{
    std::string out = "kind index x y\n";
    char line[128];
    auto append = [&](const char *kind, std::size_t idx, const Point2 &p) {
        std::snprintf(line, sizeof(line), "%s %zu %.10g %.10g\n", kind, idx, p.x, p.y);
        out += line;
    };
    for (std::size_t m = 0; m < topo.ap_positions.size(); m++)
        append("ap", m, topo.ap_positions[m]);
    for (std::size_t k = 0; k < topo.dl_ue_positions.size(); k++)
        append("dl_ue", k, topo.dl_ue_positions[k]);
    for (std::size_t l = 0; l < topo.ul_ue_positions.size(); l++)
        append("ul_ue", l, topo.ul_ue_positions[l]);
    return out;
}

} // namespace nafd
