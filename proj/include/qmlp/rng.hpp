// Copyright 2026 The qmlp authors
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

#include <cstdint>

namespace qmlp {

/// SplitMix64 generator (Steele/Lea/Vigna). Chosen over <random> engines
/// because its output — including the uint64 -> double conversion below — is
/// specified exactly, so seeded runs are bit-identical across platforms and
/// standard libraries.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) by rejection, bias-free.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    /// Independent child stream.
    SplitMix64 split() { return SplitMix64(next_u64()); }

  private:
    std::uint64_t state_;
};

/// Derives a stream seed from (seed, tag) without consuming from any shared
/// generator, so adding a new consumer never perturbs existing streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 g(seed ^ (tag * 0x9e3779b97f4a7c15ULL));
    return g.next_u64();
}

namespace seed_tag {
inline constexpr std::uint64_t kSyntheticInputs = 1;
inline constexpr std::uint64_t kSyntheticCoefficients = 2;
inline constexpr std::uint64_t kSplit = 3;
inline constexpr std::uint64_t kModelInit = 4;
inline constexpr std::uint64_t kBatchShuffle = 5;
} // namespace seed_tag

} // namespace qmlp
