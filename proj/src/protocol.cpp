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

#include "qkdsim/protocol.hpp"

#include <string>

#include "qkdsim/errors.hpp"

namespace qkdsim::protocol {

using channel::ChannelKind;
using channel::EventAction;

std::string_view to_string(OutcomeKind kind)
{
    switch (kind) {
    case OutcomeKind::MessageBit: return "message_bit";
    case OutcomeKind::EveDetected: return "eve_detected";
    case OutcomeKind::ControlPassed: return "control_passed";
    case OutcomeKind::ControlDetected: return "control_detected";
    case OutcomeKind::QubitLost: return "qubit_lost";
    }
    return "?";
}

void SessionOptions::validate() const
{
    channel.validate();
    for (Bit b : message_bits) {
        if (b > 1) {
            throw ConfigError("message bits must be 0 or 1");
        }
    }
    if (!(control_prob >= 0.0 && control_prob <= 1.0)) {
        throw ConfigError("control probability must be in [0, 1]");
    }
    if (protocol == ProtocolKind::PingPong && control_prob >= 1.0) {
        throw ConfigError("ping-pong sessions need control probability < 1 to deliver any bit");
    }
}

PauliOp encoding_pauli(ProtocolKind protocol)
{
    return protocol == ProtocolKind::LiGhz ? PauliOp::X : PauliOp::Z;
}

RoundOutcome li_decode_table(BellKind measured)
{
    switch (measured) {
    case BellKind::PhiPlus: return RoundOutcome::message(0);
    case BellKind::PsiPlus: return RoundOutcome::message(1);
    default: return RoundOutcome::of(OutcomeKind::EveDetected);
    }
}

RoundOutcome pingpong_decode_table(BellKind measured)
{
    switch (measured) {
    case BellKind::PsiPlus: return RoundOutcome::message(0);
    case BellKind::PsiMinus: return RoundOutcome::message(1);
    default: return RoundOutcome::of(OutcomeKind::EveDetected);
    }
}

RoundOutcome cai_decode_table(BellKind chosen, BellKind measured)
{
    if (chosen == BellKind::PsiPlus) {
        return pingpong_decode_table(measured);
    }
    if (chosen == BellKind::PhiPlus) {
        switch (measured) {
        case BellKind::PhiPlus: return RoundOutcome::message(0);
        case BellKind::PhiMinus: return RoundOutcome::message(1);
        default: return RoundOutcome::of(OutcomeKind::EveDetected);
        }
    }
    throw InvariantViolation("Cai preparation must be psi+ or phi+");
}

LiQubits li_alice_prepare(Register& reg)
{
    const auto [h1, h2, t] = reg.prepare_ghz(PartyId::Alice, PartyId::Alice, PartyId::Alice);
    return {h1, h2, t};
}

void bob_encode(Register& reg, QubitId travel, Bit bit, ProtocolKind protocol)
{
    if (!reg.is_live(travel)) {
        throw QuantumError("Bob cannot encode on a consumed qubit");
    }
    if (bit != 0) {
        reg.apply_pauli(encoding_pauli(protocol), travel);
    }
}

DecodeResult li_alice_decode(Register& reg, QubitId home1, QubitId home2, QubitId returned, Rng& rng)
{
    reg.apply_cnot(home2, home1);
    const BellKind bell = reg.measure_bell(home2, returned, rng);
    return {li_decode_table(bell), bell};
}

BobMode pingpong_bob_mode(Rng& rng, double c)
{
    if (!(c >= 0.0 && c <= 1.0)) {
        throw ConfigError("control probability must be in [0, 1]");
    }
    return rng.bernoulli(c) ? BobMode::Control : BobMode::Message;
}

ControlRoundResult pingpong_control_round(Register& reg, QubitId home, QubitId travel,
                                          channel::ChannelFabric& channels, int round, Rng& rng)
{
    const Bit i = reg.measure_computational(travel, rng);
    const channel::ClassicalMessage received =
        channels.send_classical({i, PartyId::Bob, PartyId::Alice, round}, reg, rng);
    const Bit j = reg.measure_computational(home, rng);
    ControlRoundResult out;
    out.exchange = {received.payload, j};
    out.outcome = RoundOutcome::of(received.payload == j ? OutcomeKind::ControlDetected
                                                         : OutcomeKind::ControlPassed);
    return out;
}

DecodeResult pingpong_alice_decode(Register& reg, QubitId home, QubitId returned, Rng& rng)
{
    const BellKind bell = reg.measure_bell(home, returned, rng);
    return {pingpong_decode_table(bell), bell};
}

CaiQubits cai_alice_prepare(Register& reg, Rng& rng)
{
    const BellKind chosen = rng.bernoulli(0.5) ? BellKind::PsiPlus : BellKind::PhiPlus;
    const auto [home, travel] = reg.prepare_bell(chosen, PartyId::Alice, PartyId::Alice);
    return {home, travel, chosen};
}

DecodeResult cai_alice_decode(Register& reg, QubitId home, QubitId returned, BellKind chosen, Rng& rng)
{
    const BellKind bell = reg.measure_bell(home, returned, rng);
    return {cai_decode_table(chosen, bell), bell};
}

namespace {

/// One protocol round in a fresh register. Fills `record` and, when Bob
/// encodes, appends to the session's bob_key.
class RoundRunner {
public:
    RoundRunner(const SessionOptions& options, SessionState& state, channel::ChannelFabric& channels, Rng& rng)
        : options_(options), state_(state), channels_(channels), rng_(rng)
    {}

    RoundRecord run(int round, Register& reg)
    {
        switch (options_.protocol) {
        case ProtocolKind::LiGhz: return li_round(round, reg);
        case ProtocolKind::PingPong: return pingpong_round(round, reg);
        case ProtocolKind::Cai: return cai_round(round, reg);
        }
        throw InvariantViolation("unknown protocol");
    }

private:
    Bit next_bit() const { return state_.message_bits.at(state_.n); }

    std::optional<QubitId> send(Register& reg, QubitId q, PartyId from, PartyId to, int round)
    {
        return channels_.send_quantum({q, from, to, round}, reg, rng_).received;
    }

    /// Bob encodes and sends back; returns what Alice receives.
    std::optional<QubitId> bob_reply(Register& reg, QubitId at_bob, int round)
    {
        const Bit bit = next_bit();
        bob_encode(reg, at_bob, bit, options_.protocol);
        state_.bob_key.push_back({round, bit});
        return send(reg, at_bob, PartyId::Bob, PartyId::Alice, round);
    }

    RoundRecord lost(int round) { return {round, RoundOutcome::of(OutcomeKind::QubitLost), {}, {}}; }

    RoundRecord li_round(int round, Register& reg)
    {
        const LiQubits q = li_alice_prepare(reg);
        const auto at_bob = send(reg, q.travel, PartyId::Alice, PartyId::Bob, round);
        if (!at_bob) {
            return lost(round);
        }
        const auto back = bob_reply(reg, *at_bob, round);
        if (!back) {
            return lost(round);
        }
        const DecodeResult d = li_alice_decode(reg, q.home1, q.home2, *back, rng_);
        return {round, d.outcome, d.bell, {}};
    }

    RoundRecord pingpong_round(int round, Register& reg)
    {
        const auto [home, travel] = reg.prepare_bell(BellKind::PsiPlus, PartyId::Alice, PartyId::Alice);
        const auto at_bob = send(reg, travel, PartyId::Alice, PartyId::Bob, round);
        if (!at_bob) {
            return lost(round);
        }
        if (pingpong_bob_mode(rng_, options_.control_prob) == BobMode::Control) {
            const ControlRoundResult c = pingpong_control_round(reg, home, *at_bob, channels_, round, rng_);
            return {round, c.outcome, {}, c.exchange};
        }
        const auto back = bob_reply(reg, *at_bob, round);
        if (!back) {
            return lost(round);
        }
        const DecodeResult d = pingpong_alice_decode(reg, home, *back, rng_);
        return {round, d.outcome, d.bell, {}};
    }

    RoundRecord cai_round(int round, Register& reg)
    {
        const CaiQubits q = cai_alice_prepare(reg, rng_);
        const auto at_bob = send(reg, q.travel, PartyId::Alice, PartyId::Bob, round);
        if (!at_bob) {
            return lost(round);
        }
        const auto back = bob_reply(reg, *at_bob, round);
        if (!back) {
            return lost(round);
        }
        const DecodeResult d = cai_alice_decode(reg, q.home, *back, q.chosen, rng_);
        return {round, d.outcome, d.bell, {}};
    }

    const SessionOptions& options_;
    SessionState& state_;
    channel::ChannelFabric& channels_;
    Rng& rng_;
};

} // namespace

SessionResult run_session(const SessionOptions& options, adversary::Adversary& adversary, Rng& rng)
{
    options.validate();

    SessionResult result;
    SessionState& state = result.state;
    state.protocol = options.protocol;
    state.message_bits = options.message_bits;
    state.control_prob = options.control_prob;

    channel::ChannelFabric channels(options.channel, adversary, result.transcript, options.protocol);
    RoundRunner runner(options, state, channels, rng);

    std::size_t consecutive_losses = 0;
    int round = 0;
    while (state.n < state.total_bits() && !state.aborted) {
        Register reg;
        RoundRecord record = runner.run(round, reg);

        channel::TapContext ctx{reg, rng, options.protocol, round};
        adversary.end_round(ctx);

        const RoundOutcome& outcome = record.outcome;
        channel::TranscriptEvent event{round, PartyId::Alice, ChannelKind::None, EventAction::Outcome, {},
                                       std::string(to_string(outcome.kind))};
        if (outcome.kind == OutcomeKind::MessageBit) {
            event.value = outcome.bit;
        }
        result.transcript.append(std::move(event));

        switch (outcome.kind) {
        case OutcomeKind::MessageBit:
            state.alice_key.push_back({round, outcome.bit});
            ++state.n;
            ++state.message_rounds;
            break;
        case OutcomeKind::EveDetected:
            // The bit was spent even though Alice could not read it.
            ++state.n;
            ++state.message_rounds;
            break;
        case OutcomeKind::ControlPassed:
        case OutcomeKind::ControlDetected:
            ++state.control_rounds;
            break;
        case OutcomeKind::QubitLost:
            ++state.lost_count;
            break;
        }
        if (outcome.is_detection()) {
            ++state.detections;
            if (options.abort_policy == AbortPolicy::AbortOnFirst) {
                state.aborted = true;
            }
        }
        state.rounds.push_back(std::move(record));
        ++round;

        if (outcome.kind == OutcomeKind::QubitLost) {
            if (++consecutive_losses > options.max_retries) {
                state.stalled = true;
                break;
            }
        } else {
            consecutive_losses = 0;
        }
    }
    return result;
}

} // namespace qkdsim::protocol
