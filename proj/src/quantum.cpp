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

#include "qkdsim/quantum.hpp"

#include <cmath>
#include <string>

#include "qkdsim/errors.hpp"

namespace qkdsim::quantum {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t mask_of(QubitId q)
{
    return std::size_t{1} << q.index;
}

} // namespace

std::string_view to_string(BellKind kind)
{
    switch (kind) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
    }
    return "?";
}

std::string_view to_string(PauliOp op)
{
    switch (op) {
    case PauliOp::I: return "I";
    case PauliOp::X: return "X";
    case PauliOp::Z: return "Z";
    }
    return "?";
}

Register::Register() : amplitudes_{Amplitude{1.0, 0.0}} {}

void Register::require_capacity(std::size_t extra) const
{
    if (owners_.size() + extra > kMaxQubits) {
        throw QuantumError("register capacity of " + std::to_string(kMaxQubits) + " qubits exceeded");
    }
}

void Register::require_live(QubitId q) const
{
    if (q.index >= owners_.size()) {
        throw QuantumError("qubit " + std::to_string(q.index) + " was never allocated");
    }
    if (consumed_[q.index]) {
        throw QuantumError("qubit " + std::to_string(q.index) + " has been consumed");
    }
}

void Register::check_norm() const
{
    const double n = norm_squared();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        throw InvariantViolation("register norm drifted to " + std::to_string(n));
    }
}

double Register::norm_squared() const
{
    double total = 0.0;
    for (const auto& a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

QubitId Register::alloc_qubit(Bit initial, PartyId owner)
{
    require_capacity(1);
    const QubitId q{owners_.size()};
    const std::size_t old = amplitudes_.size();
    // New qubit is the most significant bit: old state sits in the lower half
    // when the qubit is |0>, in the upper half when it is |1>.
    amplitudes_.resize(old * 2, Amplitude{});
    if (initial != 0) {
        for (std::size_t i = 0; i < old; ++i) {
            amplitudes_[old + i] = amplitudes_[i];
            amplitudes_[i] = Amplitude{};
        }
    }
    owners_.push_back(owner);
    consumed_.push_back(false);
    check_norm();
    return q;
}

std::pair<QubitId, QubitId> Register::prepare_bell(BellKind kind, PartyId owner_a, PartyId owner_b)
{
    require_capacity(2);
    // |0 p> -> H on a -> CNOT(a, b) -> optional Z on a, with p the parity bit.
    const bool odd_parity = kind == BellKind::PsiPlus || kind == BellKind::PsiMinus;
    const bool minus = kind == BellKind::PhiMinus || kind == BellKind::PsiMinus;
    const QubitId a = alloc_qubit(0, owner_a);
    const QubitId b = alloc_qubit(odd_parity ? 1 : 0, owner_b);
    const std::size_t ma = mask_of(a);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & ma) != 0) {
            continue;
        }
        // a was just allocated as |0>, so the a = 1 half is empty here.
        const Amplitude v = amplitudes_[i];
        amplitudes_[i] = v * kInvSqrt2;
        amplitudes_[i | ma] = v * kInvSqrt2;
    }
    // b currently carries the parity bit; flip it where a = 1 to entangle.
    apply_cnot(a, b);
    // Phase: Phi- negates |11>, Psi- negates |10> (a = 1, b = 0).
    if (minus) {
        apply_pauli(PauliOp::Z, a);
    }
    return {a, b};
}

std::array<QubitId, 3> Register::prepare_ghz(PartyId owner_a, PartyId owner_b, PartyId owner_c)
{
    require_capacity(3);
    const auto [a, b] = prepare_bell(BellKind::PhiPlus, owner_a, owner_b);
    const QubitId c = alloc_qubit(0, owner_c);
    apply_cnot(b, c);
    return {a, b, c};
}

void Register::apply_pauli(PauliOp op, QubitId q)
{
    require_live(q);
    const std::size_t m = mask_of(q);
    switch (op) {
    case PauliOp::I:
        break;
    case PauliOp::X:
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & m) == 0) {
                std::swap(amplitudes_[i], amplitudes_[i | m]);
            }
        }
        break;
    case PauliOp::Z:
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & m) != 0) {
                amplitudes_[i] = -amplitudes_[i];
            }
        }
        break;
    }
    check_norm();
}

void Register::apply_cnot(QubitId control, QubitId target)
{
    if (control == target) {
        throw QuantumError("CNOT control and target must differ");
    }
    require_live(control);
    require_live(target);
    const std::size_t mc = mask_of(control);
    const std::size_t mt = mask_of(target);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & mc) != 0 && (i & mt) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | mt]);
        }
    }
    check_norm();
}

void Register::apply_rotation(QubitId q, double theta)
{
    require_live(q);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::size_t m = mask_of(q);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & m) != 0) {
            continue;
        }
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | m];
        amplitudes_[i] = c * a0 - s * a1;
        amplitudes_[i | m] = s * a0 + c * a1;
    }
    check_norm();
}

Bit Register::sample_binary(double p0, double p1, Rng& rng) const
{
    const double u = rng.uniform();
    const bool zero_ok = p0 >= kUnreachableProbability;
    const bool one_ok = p1 >= kUnreachableProbability;
    if (!zero_ok && !one_ok) {
        throw InvariantViolation("measurement with no reachable outcome");
    }
    if (!zero_ok) {
        return 1;
    }
    if (!one_ok) {
        return 0;
    }
    return u * (p0 + p1) < p0 ? 0 : 1;
}

Bit Register::measure_computational(QubitId q, Rng& rng)
{
    return measure_rotated(q, 0.0, rng);
}

Bit Register::measure_rotated(QubitId q, double theta, Rng& rng)
{
    require_live(q);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::size_t m = mask_of(q);

    // Coordinates in the measurement basis: b0 = <e0|a>, b1 = <e1|a>.
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & m) != 0) {
            continue;
        }
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | m];
        p0 += std::norm(c * a0 + s * a1);
        p1 += std::norm(-s * a0 + c * a1);
    }
    const Bit outcome = sample_binary(p0, p1, rng);
    const double scale = 1.0 / std::sqrt(outcome == 0 ? p0 : p1);

    // Collapse onto e_outcome (x) remainder, expressed back in the computational basis.
    const double e0 = outcome == 0 ? c : -s;
    const double e1 = outcome == 0 ? s : c;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & m) != 0) {
            continue;
        }
        const Amplitude coeff = (e0 * amplitudes_[i] + e1 * amplitudes_[i | m]) * scale;
        amplitudes_[i] = e0 * coeff;
        amplitudes_[i | m] = e1 * coeff;
    }
    check_norm();
    return outcome;
}

BellKind Register::measure_bell(QubitId q1, QubitId q2, Rng& rng)
{
    if (q1 == q2) {
        throw QuantumError("Bell measurement needs two distinct qubits");
    }
    require_live(q1);
    require_live(q2);
    const std::size_t m1 = mask_of(q1);
    const std::size_t m2 = mask_of(q2);

    // Bell components of each branch, indexed by BellKind order.
    auto components = [&](std::size_t base) {
        const Amplitude a00 = amplitudes_[base];
        const Amplitude a01 = amplitudes_[base | m2];
        const Amplitude a10 = amplitudes_[base | m1];
        const Amplitude a11 = amplitudes_[base | m1 | m2];
        return std::array<Amplitude, 4>{(a00 + a11) * kInvSqrt2, (a00 - a11) * kInvSqrt2,
                                        (a01 + a10) * kInvSqrt2, (a01 - a10) * kInvSqrt2};
    };

    std::array<double, 4> probs{};
    for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
        if ((base & (m1 | m2)) != 0) {
            continue;
        }
        const auto comp = components(base);
        for (std::size_t k = 0; k < 4; ++k) {
            probs[k] += std::norm(comp[k]);
        }
    }

    double reachable = 0.0;
    for (double p : probs) {
        if (p >= kUnreachableProbability) {
            reachable += p;
        }
    }
    if (reachable <= 0.0) {
        throw InvariantViolation("Bell measurement with no reachable outcome");
    }
    const double u = rng.uniform() * reachable;
    std::size_t chosen = 4;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (probs[k] < kUnreachableProbability) {
            continue;
        }
        cumulative += probs[k];
        chosen = k;
        if (u < cumulative) {
            break;
        }
    }

    const double scale = 1.0 / std::sqrt(probs[chosen]);
    for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
        if ((base & (m1 | m2)) != 0) {
            continue;
        }
        const Amplitude c = components(base)[chosen] * scale * kInvSqrt2;
        Amplitude& a00 = amplitudes_[base];
        Amplitude& a01 = amplitudes_[base | m2];
        Amplitude& a10 = amplitudes_[base | m1];
        Amplitude& a11 = amplitudes_[base | m1 | m2];
        a00 = a01 = a10 = a11 = Amplitude{};
        switch (static_cast<BellKind>(chosen)) {
        case BellKind::PhiPlus: a00 = c; a11 = c; break;
        case BellKind::PhiMinus: a00 = c; a11 = -c; break;
        case BellKind::PsiPlus: a01 = c; a10 = c; break;
        case BellKind::PsiMinus: a01 = c; a10 = -c; break;
        }
    }
    consumed_[q1.index] = true;
    consumed_[q2.index] = true;
    check_norm();
    return static_cast<BellKind>(chosen);
}

void Register::discard(QubitId q)
{
    require_live(q);
    consumed_[q.index] = true;
}

PartyId Register::owner(QubitId q) const
{
    if (q.index >= owners_.size()) {
        throw QuantumError("qubit " + std::to_string(q.index) + " was never allocated");
    }
    return owners_[q.index];
}

void Register::set_owner(QubitId q, PartyId owner)
{
    require_live(q);
    owners_[q.index] = owner;
}

bool Register::is_consumed(QubitId q) const
{
    return q.index < consumed_.size() && consumed_[q.index];
}

bool Register::is_live(QubitId q) const
{
    return q.index < consumed_.size() && !consumed_[q.index];
}

double Register::probability_one(QubitId q) const
{
    require_live(q);
    const std::size_t m = mask_of(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & m) != 0) {
            p += std::norm(amplitudes_[i]);
        }
    }
    return p;
}

} // namespace qkdsim::quantum
