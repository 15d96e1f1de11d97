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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkdsim/quantum.hpp"
#include "qkdsim/rng.hpp"
#include "qkdsim/types.hpp"

namespace qkdsim::channel {

using quantum::QubitId;
using quantum::Register;

enum class ChannelKind : std::uint8_t { Quantum, Classical, None };

enum class EventAction : std::uint8_t {
    Send,     // sender hands a qubit or bit to the channel
    Deliver,  // receiver gets it
    Lose,     // qubit dropped by the loss model
    Capture,  // Eve takes the qubit
    Inject,   // Eve delivers a substitute qubit
    Observe,  // Eve taps without changing what is forwarded
    Replace,  // Eve rewrites a classical payload
    Outcome,  // a party's local result for the round
};

std::string_view to_string(ChannelKind kind);
std::string_view to_string(EventAction action);

struct TranscriptEvent {
    int round = 0;
    PartyId party = PartyId::Alice;
    ChannelKind channel = ChannelKind::None;
    EventAction action = EventAction::Send;
    std::optional<int> value;  // qubit index, payload bit, or outcome bit
    std::string detail;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Ordered, append-only log of everything that crossed a channel in a session.
class Transcript {
public:
    void append(TranscriptEvent event) { events_.push_back(std::move(event)); }

    const std::vector<TranscriptEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    std::size_t count(ChannelKind channel, EventAction action) const;
    std::size_t count_in_round(int round, ChannelKind channel, EventAction action) const;

    /// Copy without Eve's tap events (Capture, Inject, Observe, Replace).
    Transcript without_taps() const;

private:
    std::vector<TranscriptEvent> events_;
};

struct QuantumMessage {
    QubitId qubit;
    PartyId from = PartyId::Alice;
    PartyId to = PartyId::Bob;
    int round = 0;
};

struct ClassicalMessage {
    Bit payload = 0;
    PartyId from = PartyId::Bob;
    PartyId to = PartyId::Alice;
    int round = 0;
};

struct ChannelConfig {
    double loss_prob = 0.0;
    double eve_removal_rate = 0.0;

    /// Loss seen by the parties: 1 - (1 - loss)(1 - removal).
    double effective_loss() const { return loss_prob + eve_removal_rate - loss_prob * eve_removal_rate; }

    /// Throws ConfigError unless both rates are in [0, 1].
    void validate() const;
};

enum class SendStatus : std::uint8_t { Delivered, Captured, Lost };

struct SendResult {
    SendStatus status = SendStatus::Delivered;
    /// What the receiver holds afterwards: the original qubit, Eve's substitute, or nothing.
    std::optional<QubitId> received;
};

/// Everything a tap may touch while a message is in flight.
struct TapContext {
    Register& reg;
    Rng& rng;
    ProtocolKind protocol;
    int round;
};

enum class TapAction : std::uint8_t { Pass, Observe, Capture };

struct QuantumTapResult {
    TapAction action = TapAction::Pass;
    std::optional<QubitId> substitute;  // only meaningful with Capture
};

enum class ClassicalTapAction : std::uint8_t { Pass, Observe, Replace };

struct ClassicalTapResult {
    ClassicalTapAction action = ClassicalTapAction::Pass;
    Bit payload = 0;
};

/// Hook invoked on every crossing before loss is sampled. Default: passive.
class ChannelTap {
public:
    virtual ~ChannelTap() = default;

    virtual QuantumTapResult on_quantum(const QuantumMessage& msg, TapContext& ctx);
    virtual ClassicalTapResult on_classical(const ClassicalMessage& msg, TapContext& ctx);
};

/// Quantum and classical links of one session, with a single adversary tap.
///
/// Ordering per quantum crossing: Send, tap, then loss sampling for qubits the
/// tap did not capture. Captured qubits are never lost; a substitute, if any,
/// is delivered as-is. One uniform draw is spent on loss per uncaptured
/// crossing even at zero loss, so enabling loss does not shift other draws.
/// The classical link is lossless and unauthenticated.
class ChannelFabric {
public:
    ChannelFabric(ChannelConfig config, ChannelTap& tap, Transcript& transcript, ProtocolKind protocol);

    SendResult send_quantum(const QuantumMessage& msg, Register& reg, Rng& rng);
    ClassicalMessage send_classical(const ClassicalMessage& msg, Register& reg, Rng& rng);

    void transcript_append(TranscriptEvent event) { transcript_.append(std::move(event)); }

    const ChannelConfig& config() const { return config_; }
    std::size_t quantum_crossings() const { return crossings_; }
    std::size_t lost_count() const { return lost_; }

private:
    ChannelConfig config_;
    ChannelTap& tap_;
    Transcript& transcript_;
    ProtocolKind protocol_;
    std::size_t crossings_ = 0;
    std::size_t lost_ = 0;
};

} // namespace qkdsim::channel
