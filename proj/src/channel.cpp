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

#include "qkdsim/channel.hpp"

#include <algorithm>

#include "qkdsim/errors.hpp"

namespace qkdsim::channel {

std::string_view to_string(ChannelKind kind)
{
    switch (kind) {
    case ChannelKind::Quantum: return "quantum";
    case ChannelKind::Classical: return "classical";
    case ChannelKind::None: return "none";
    }
    return "?";
}

std::string_view to_string(EventAction action)
{
    switch (action) {
    case EventAction::Send: return "send";
    case EventAction::Deliver: return "deliver";
    case EventAction::Lose: return "lose";
    case EventAction::Capture: return "capture";
    case EventAction::Inject: return "inject";
    case EventAction::Observe: return "observe";
    case EventAction::Replace: return "replace";
    case EventAction::Outcome: return "outcome";
    }
    return "?";
}

namespace {

bool is_tap_action(EventAction action)
{
    return action == EventAction::Capture || action == EventAction::Inject ||
           action == EventAction::Observe || action == EventAction::Replace;
}

} // namespace

std::size_t Transcript::count(ChannelKind channel, EventAction action) const
{
    return static_cast<std::size_t>(std::count_if(events_.begin(), events_.end(), [&](const auto& e) {
        return e.channel == channel && e.action == action;
    }));
}

std::size_t Transcript::count_in_round(int round, ChannelKind channel, EventAction action) const
{
    return static_cast<std::size_t>(std::count_if(events_.begin(), events_.end(), [&](const auto& e) {
        return e.round == round && e.channel == channel && e.action == action;
    }));
}

Transcript Transcript::without_taps() const
{
    Transcript out;
    for (const auto& e : events_) {
        if (!is_tap_action(e.action)) {
            out.append(e);
        }
    }
    return out;
}

void ChannelConfig::validate() const
{
    if (!(loss_prob >= 0.0 && loss_prob <= 1.0)) {
        throw ConfigError("loss probability must be in [0, 1]");
    }
    if (!(eve_removal_rate >= 0.0 && eve_removal_rate <= 1.0)) {
        throw ConfigError("eve removal rate must be in [0, 1]");
    }
}

QuantumTapResult ChannelTap::on_quantum(const QuantumMessage&, TapContext&)
{
    return {};
}

ClassicalTapResult ChannelTap::on_classical(const ClassicalMessage& msg, TapContext&)
{
    return {ClassicalTapAction::Pass, msg.payload};
}

ChannelFabric::ChannelFabric(ChannelConfig config, ChannelTap& tap, Transcript& transcript, ProtocolKind protocol)
    : config_(config), tap_(tap), transcript_(transcript), protocol_(protocol)
{
    config_.validate();
}

SendResult ChannelFabric::send_quantum(const QuantumMessage& msg, Register& reg, Rng& rng)
{
    if (!reg.is_live(msg.qubit)) {
        throw ChannelError("cannot send a consumed or unallocated qubit");
    }
    if (reg.owner(msg.qubit) != msg.from) {
        throw ChannelError("qubit " + std::to_string(msg.qubit.index) + " is not owned by " +
                           std::string(to_string(msg.from)));
    }
    ++crossings_;
    const int qubit = static_cast<int>(msg.qubit.index);
    transcript_.append({msg.round, msg.from, ChannelKind::Quantum, EventAction::Send, qubit, {}});

    TapContext ctx{reg, rng, protocol_, msg.round};
    const QuantumTapResult tap = tap_.on_quantum(msg, ctx);

    if (tap.action == TapAction::Capture) {
        if (reg.is_live(msg.qubit)) {
            reg.set_owner(msg.qubit, PartyId::Eve);
        }
        transcript_.append({msg.round, PartyId::Eve, ChannelKind::Quantum, EventAction::Capture, qubit, {}});
        if (!tap.substitute) {
            return {SendStatus::Captured, std::nullopt};
        }
        const QubitId sub = *tap.substitute;
        reg.set_owner(sub, msg.to);
        transcript_.append({msg.round, PartyId::Eve, ChannelKind::Quantum, EventAction::Inject,
                            static_cast<int>(sub.index), {}});
        transcript_.append({msg.round, msg.to, ChannelKind::Quantum, EventAction::Deliver,
                            static_cast<int>(sub.index), {}});
        return {SendStatus::Captured, sub};
    }
    if (tap.action == TapAction::Observe) {
        transcript_.append({msg.round, PartyId::Eve, ChannelKind::Quantum, EventAction::Observe, qubit, {}});
    }

    if (rng.bernoulli(config_.effective_loss())) {
        ++lost_;
        reg.discard(msg.qubit);
        transcript_.append({msg.round, msg.from, ChannelKind::Quantum, EventAction::Lose, qubit, {}});
        return {SendStatus::Lost, std::nullopt};
    }
    reg.set_owner(msg.qubit, msg.to);
    transcript_.append({msg.round, msg.to, ChannelKind::Quantum, EventAction::Deliver, qubit, {}});
    return {SendStatus::Delivered, msg.qubit};
}

ClassicalMessage ChannelFabric::send_classical(const ClassicalMessage& msg, Register& reg, Rng& rng)
{
    if (msg.payload > 1) {
        throw ChannelError("classical payload must be a single bit");
    }
    transcript_.append({msg.round, msg.from, ChannelKind::Classical, EventAction::Send, msg.payload, {}});
    TapContext ctx{reg, rng, protocol_, msg.round};
    const ClassicalTapResult tap = tap_.on_classical(msg, ctx);

    ClassicalMessage delivered = msg;
    switch (tap.action) {
    case ClassicalTapAction::Pass:
        break;
    case ClassicalTapAction::Observe:
        transcript_.append({msg.round, PartyId::Eve, ChannelKind::Classical, EventAction::Observe, msg.payload, {}});
        break;
    case ClassicalTapAction::Replace:
        delivered.payload = tap.payload;
        transcript_.append({msg.round, PartyId::Eve, ChannelKind::Classical, EventAction::Replace, tap.payload, {}});
        break;
    }
    transcript_.append({msg.round, msg.to, ChannelKind::Classical, EventAction::Deliver, delivered.payload, {}});
    return delivered;
}

} // namespace qkdsim::channel
