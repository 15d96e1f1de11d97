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

#include "qkdsim/adversary.hpp"

#include <string>

#include "qkdsim/errors.hpp"

namespace qkdsim::adversary {

using channel::ClassicalMessage;
using channel::ClassicalTapAction;
using channel::ClassicalTapResult;
using channel::QuantumMessage;
using channel::QuantumTapResult;
using channel::TapAction;
using channel::TapContext;
using quantum::BellKind;
using quantum::PauliOp;

namespace {

bool is_forward(const QuantumMessage& msg)
{
    return msg.from == PartyId::Alice && msg.to == PartyId::Bob;
}

bool is_return(const QuantumMessage& msg)
{
    return msg.from == PartyId::Bob && msg.to == PartyId::Alice;
}

PauliOp relay_pauli(ProtocolKind protocol)
{
    return protocol == ProtocolKind::LiGhz ? PauliOp::X : PauliOp::Z;
}

} // namespace

void Adversary::end_round(TapContext& ctx)
{
    state_.retained.erase(ctx.round);
}

QuantumTapResult ObservingAdversary::on_quantum(const QuantumMessage&, TapContext&)
{
    return {TapAction::Observe, std::nullopt};
}

ClassicalTapResult ObservingAdversary::on_classical(const ClassicalMessage& msg, TapContext&)
{
    return {ClassicalTapAction::Observe, msg.payload};
}

InterceptResendAdversary::InterceptResendAdversary(double eve_theta, double world_offset, Legs legs)
    : measure_angle_(eve_theta - world_offset), legs_(legs)
{}

QuantumTapResult InterceptResendAdversary::on_quantum(const QuantumMessage& msg, TapContext& ctx)
{
    const bool wanted = legs_ == Legs::Both || (legs_ == Legs::Forward && is_forward(msg)) ||
                        (legs_ == Legs::Return && is_return(msg));
    if (!wanted) {
        return {};
    }
    intercept_resend_tap(msg.qubit, ctx.reg, ctx.rng);
    return {TapAction::Observe, std::nullopt};
}

QubitId InterceptResendAdversary::intercept_resend_tap(QubitId qubit, Register& reg, Rng& rng)
{
    state_.basis_samples.add(reg.measure_rotated(qubit, measure_angle_, rng));
    return qubit;
}

QuantumTapResult CnotProbeAdversary::on_quantum(const QuantumMessage& msg, TapContext& ctx)
{
    if (!is_return(msg)) {
        return {};
    }
    cnot_probe_tap(ctx.round, msg.qubit, ctx.reg);
    return {TapAction::Observe, std::nullopt};
}

QubitId CnotProbeAdversary::cnot_probe_tap(int round, QubitId returned, Register& reg)
{
    const QubitId ancilla = reg.alloc_qubit(0, PartyId::Eve);
    reg.apply_cnot(returned, ancilla);
    state_.retained[round].ancilla = ancilla;
    return returned;
}

void CnotProbeAdversary::end_round(TapContext& ctx)
{
    const auto it = state_.retained.find(ctx.round);
    if (it != state_.retained.end() && it->second.ancilla && ctx.reg.is_live(*it->second.ancilla)) {
        state_.eve_key.push_back({ctx.round, ctx.reg.measure_computational(*it->second.ancilla, ctx.rng)});
    }
    Adversary::end_round(ctx);
}

Bit mitm_decode(ProtocolKind protocol, BellKind outcome)
{
    // Bob's Pauli acts on Eve's Phi+: X moves it to Psi+, Z to Phi-.
    if (outcome == BellKind::PhiPlus) {
        return 0;
    }
    const BellKind one = protocol == ProtocolKind::LiGhz ? BellKind::PsiPlus : BellKind::PhiMinus;
    if (outcome == one) {
        return 1;
    }
    throw InvariantViolation("EPR relay saw " + std::string(quantum::to_string(outcome)) + " for protocol " +
                             std::string(to_string(protocol)));
}

QuantumTapResult EprMitmAdversary::on_quantum(const QuantumMessage& msg, TapContext& ctx)
{
    if (is_forward(msg)) {
        return {TapAction::Capture, forward_tap(ctx.round, msg.qubit, ctx.reg)};
    }
    if (is_return(msg)) {
        return {TapAction::Capture, return_tap(ctx.round, msg.qubit, ctx.reg, ctx.protocol, ctx.rng)};
    }
    return {};
}

ClassicalTapResult EprMitmAdversary::on_classical(const ClassicalMessage& msg, TapContext& ctx)
{
    return {ClassicalTapAction::Replace, classical_tap(ctx.round, msg.payload, ctx.reg, ctx.rng)};
}

QubitId EprMitmAdversary::forward_tap(int round, QubitId captured, Register& reg)
{
    reg.set_owner(captured, PartyId::Eve);
    const auto [kept, sent] = reg.prepare_bell(BellKind::PhiPlus, PartyId::Eve, PartyId::Eve);
    RetainedQubits& slot = state_.retained[round];
    slot.captured = captured;
    slot.epr_half = kept;
    return sent;
}

QubitId EprMitmAdversary::return_tap(int round, QubitId returned, Register& reg, ProtocolKind protocol, Rng& rng)
{
    const auto it = state_.retained.find(round);
    if (it == state_.retained.end() || !it->second.captured || !it->second.epr_half) {
        throw AdversaryError("no captured qubit held for round " + std::to_string(round));
    }
    reg.set_owner(returned, PartyId::Eve);
    const BellKind outcome = reg.measure_bell(*it->second.epr_half, returned, rng);
    const Bit bit = mitm_decode(protocol, outcome);
    state_.eve_key.push_back({round, bit});
    const QubitId captured = *it->second.captured;
    if (bit != 0) {
        reg.apply_pauli(relay_pauli(protocol), captured);
    }
    return captured;
}

Bit EprMitmAdversary::classical_tap(int round, Bit i_from_bob, Register& reg, Rng& rng)
{
    const auto it = state_.retained.find(round);
    if (it == state_.retained.end() || !it->second.captured) {
        throw AdversaryError("no captured qubit held for round " + std::to_string(round));
    }
    const Bit forwarded = reg.measure_computational(*it->second.captured, rng);
    state_.intercepted.push_back({round, i_from_bob, forwarded});
    return forwarded;
}

} // namespace qkdsim::adversary
