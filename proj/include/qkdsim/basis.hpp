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

#include <cstddef>

#include "qkdsim/adversary.hpp"
#include "qkdsim/rng.hpp"

namespace qkdsim::adversary {

struct BasisEstimate {
    double p0 = 0.5;
    double theta = 0.0;
};

/// Long-run proportion of 0s for a basis offset theta: cos^2(theta + pi/4).
double basis_offset_p0(double theta);

/// arccos(sqrt(p0)) - pi/4. Throws AdversaryError if p0 is outside [0, 1].
double basis_offset_from_p0(double p0);

/// theta = arccos(sqrt(p0)) - pi/4 from observed counts. Inverts
/// basis_offset_p0 on [-pi/4, pi/4]. Throws AdversaryError on zero samples.
BasisEstimate estimate_basis_offset(const BasisCounts& samples);

/// Qubits Eve pulls off the channel while calibrating. Each carries the
/// parties' balanced state, which in Eve's frame sits at angle
/// world_offset + sign * pi/4 (sign = +1 for |+>, -1 for |->).
struct ProbeSource {
    double world_offset = 0.0;
    int state_sign = +1;
};

/// Draws `samples` fresh probe qubits and measures each at `eve_angle`.
BasisCounts sample_probe_batch(const ProbeSource& source, double eve_angle, std::size_t samples, Rng& rng);

struct BasisCalibration {
    BasisEstimate estimate;       // from the first batch, measured at angle 0
    BasisCounts first;
    BasisCounts second;           // measured at estimate.theta
    double check_p0 = 0.5;        // proportion of 0s in the second batch
    bool sign_flipped = false;
    double resolved_theta = 0.0;  // estimate.theta, or its negation if the check failed
};

/// Keeps theta when the check batch is within 3 sigma of 50/50, else -theta.
double resolve_basis_sign(double theta, const BasisCounts& check);

/// Two-batch procedure: estimate from the distribution at angle 0, then
/// confirm the sign with a batch measured at the estimated angle.
BasisCalibration calibrate_basis(const ProbeSource& source, std::size_t samples_per_batch, Rng& rng);

} // namespace qkdsim::adversary
