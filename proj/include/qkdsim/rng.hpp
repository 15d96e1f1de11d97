// Copyright 2026 The qkdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace qkdsim {

/// Counter-based pseudo-random stream keyed by (seed, stream).
///
/// Draw k of stream s is a pure function of (seed, s, k), so sessions keyed by
/// their index produce the same outcomes regardless of execution order. The
/// mixing function is the SplitMix64 finalizer, which is fixed across
/// platforms; uniform doubles use the top 53 bits, so no standard-library
/// distribution (whose algorithms are implementation-defined) is involved.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();

    /// True with probability p. p <= 0 never fires, p >= 1 always fires.
    bool bernoulli(double p);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent child seed, e.g. for one value of a parameter sweep.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace qkdsim
