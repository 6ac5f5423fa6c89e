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

#include <cstdint>
#include <random>

namespace nafd
{

// Named sub-streams of the master seed. Every random quantity in the
// simulator draws from a generator seeded by (master, stream, index), so
// results never depend on call order or thread scheduling.
enum : std::uint64_t
{
    stream_ap_placement = 1,
    stream_ue_placement = 2,
    stream_shadowing = 3,
    stream_small_scale = 4,
    stream_topology_sweep = 5,
    stream_test = 99
};

// SplitMix64 mixing function (public-domain constants). Used only to derive
// well-separated seeds for std::mt19937_64 sub-stream generators.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0)
{
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

inline std::mt19937_64 make_generator(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0)
{
    return std::mt19937_64(derive_seed(master, stream, index));
}

} // namespace nafd
