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

#include "qkdsim/basis.hpp"

#include <cmath>
#include <numbers>

#include "qkdsim/errors.hpp"
#include "qkdsim/quantum.hpp"

namespace qkdsim::adversary {

double basis_offset_p0(double theta)
{
    const double c = std::cos(theta + std::numbers::pi / 4);
    return c * c;
}

double basis_offset_from_p0(double p0)
{
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw AdversaryError("p0 must lie in [0, 1]");
    }
    return std::acos(std::sqrt(p0)) - std::numbers::pi / 4;
}

BasisEstimate estimate_basis_offset(const BasisCounts& samples)
{
    if (samples.total() == 0) {
        throw AdversaryError("basis estimation needs at least one sample");
    }
    BasisEstimate out;
    out.p0 = static_cast<double>(samples.zeros) / static_cast<double>(samples.total());
    out.theta = basis_offset_from_p0(out.p0);
    return out;
}

BasisCounts sample_probe_batch(const ProbeSource& source, double eve_angle, std::size_t samples, Rng& rng)
{
    const double state_angle = source.world_offset + source.state_sign * std::numbers::pi / 4;
    BasisCounts counts;
    for (std::size_t k = 0; k < samples; ++k) {
        quantum::Register reg;
        const auto q = reg.alloc_qubit(0, PartyId::Alice);
        reg.apply_rotation(q, state_angle);
        reg.set_owner(q, PartyId::Eve);
        counts.add(reg.measure_rotated(q, eve_angle, rng));
    }
    return counts;
}

double resolve_basis_sign(double theta, const BasisCounts& check)
{
    if (check.total() == 0) {
        throw AdversaryError("sign check needs at least one sample");
    }
    const double n = static_cast<double>(check.total());
    const double p0 = static_cast<double>(check.zeros) / n;
    const double three_sigma = 3.0 * 0.5 / std::sqrt(n);
    return std::abs(p0 - 0.5) <= three_sigma ? theta : -theta;
}

BasisCalibration calibrate_basis(const ProbeSource& source, std::size_t samples_per_batch, Rng& rng)
{
    BasisCalibration cal;
    cal.first = sample_probe_batch(source, 0.0, samples_per_batch, rng);
    cal.estimate = estimate_basis_offset(cal.first);
    cal.second = sample_probe_batch(source, cal.estimate.theta, samples_per_batch, rng);
    cal.check_p0 = static_cast<double>(cal.second.zeros) / static_cast<double>(cal.second.total());
    cal.resolved_theta = resolve_basis_sign(cal.estimate.theta, cal.second);
    cal.sign_flipped = cal.resolved_theta != cal.estimate.theta;
    return cal;
}

} // namespace qkdsim::adversary
