// Copyright 2026 the qoc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

#include "qoc/system.hpp"

namespace qoc {

/// Avalanche stage of splitmix64 (Stafford's mix13 finalizer).
inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * splitmix64: a tiny, well-mixed 64-bit generator. Chosen over the standard
 * library engines because its output — and therefore every survey — is
 * bit-identical across platforms.
 */
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() { return mix64(state += 0x9E3779B97F4A7C15ULL); }

    /// Uniform double in [0, 1) from the top 53 bits; avoids the
    /// implementation-defined std::uniform_real_distribution.
    double next_unit()
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

/**
 * Per-run stream: the run index is avalanche-mixed into the master seed, so
 * each run starts from an unrelated point of the state space. A plain
 * golden-ratio offset would make neighboring runs shifted copies of one
 * underlying sequence (draw j of run i equals draw j-1 of run i+1).
 */
inline SplitMix64 run_stream(std::uint64_t master_seed, std::uint64_t run_index)
{
    return SplitMix64(mix64(master_seed + run_index * 0x9E3779B97F4A7C15ULL));
}

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/**
 * Random initial controls for one survey run: u_k uniform over u_range and
 * n_k uniform over n_range per interval, stored as w_k = sqrt(n_k). A pure
 * function of (master_seed, run_index).
 */
inline ControlVector sample_initial(std::uint64_t master_seed, std::uint64_t run_index,
                                    const TimeGrid& grid, const Interval& u_range,
                                    const Interval& n_range)
{
    SplitMix64 rng = run_stream(master_seed, run_index);
    ControlVector controls = ControlVector::zeros(grid.M);
    for (int k = 0; k < grid.M; ++k) {
        controls.u[k] = u_range.lo + (u_range.hi - u_range.lo) * rng.next_unit();
    }
    for (int k = 0; k < grid.M; ++k) {
        const double n = n_range.lo + (n_range.hi - n_range.lo) * rng.next_unit();
        controls.w[k] = std::sqrt(n);
    }
    return controls;
}

} // namespace qoc
