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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qkdsim/adversary.hpp"
#include "qkdsim/channel.hpp"
#include "qkdsim/quantum.hpp"
#include "qkdsim/rng.hpp"
#include "qkdsim/types.hpp"

namespace qkdsim::protocol {

using quantum::BellKind;
using quantum::PauliOp;
using quantum::QubitId;
using quantum::Register;

enum class OutcomeKind : std::uint8_t { MessageBit, EveDetected, ControlPassed, ControlDetected, QubitLost };

struct RoundOutcome {
    OutcomeKind kind = OutcomeKind::QubitLost;
    Bit bit = 0;  // only meaningful for MessageBit

    static RoundOutcome message(Bit b) { return {OutcomeKind::MessageBit, b}; }
    static RoundOutcome of(OutcomeKind kind) { return {kind, 0}; }

    bool is_detection() const { return kind == OutcomeKind::EveDetected || kind == OutcomeKind::ControlDetected; }

    friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

std::string_view to_string(OutcomeKind kind);

enum class AbortPolicy : std::uint8_t { AbortOnFirst, RunToEnd };

enum class BobMode : std::uint8_t { Control, Message };

/// Ping-pong control-mode bits: i as Alice received it, j from her home qubit.
struct ControlExchange {
    Bit i = 0;
    Bit j = 0;
};

struct RoundRecord {
    int round = 0;
    RoundOutcome outcome;
    std::optional<BellKind> bell;           // Alice's Bell result, when she measured one
    std::optional<ControlExchange> control; // ping-pong control rounds only
};

struct SessionState {
    ProtocolKind protocol = ProtocolKind::LiGhz;
    std::vector<Bit> message_bits;  // Bob's payload x_1..x_N
    std::size_t n = 0;              // message rounds completed
    double control_prob = 0.0;
    std::vector<KeyBit> alice_key;  // Alice's decoded bits
    std::vector<KeyBit> bob_key;    // bits Bob encoded and sent back
    std::vector<RoundRecord> rounds;
    bool aborted = false;
    bool stalled = false;  // loss retry cap exhausted
    std::size_t lost_count = 0;
    std::size_t control_rounds = 0;
    std::size_t message_rounds = 0;
    std::size_t detections = 0;

    std::size_t total_bits() const { return message_bits.size(); }
    bool detected() const { return detections > 0; }
};

struct SessionOptions {
    ProtocolKind protocol = ProtocolKind::LiGhz;
    std::vector<Bit> message_bits;
    double control_prob = 0.0;
    channel::ChannelConfig channel;
    AbortPolicy abort_policy = AbortPolicy::AbortOnFirst;
    std::size_t max_retries = 100;

    /// Throws ConfigError. Ping-pong requires c < 1 so a session can finish.
    void validate() const;
};

struct SessionResult {
    channel::Transcript transcript;
    SessionState state;
};

/// Bob's encoding operator: X for Li, Z for ping-pong and Cai.
PauliOp encoding_pauli(ProtocolKind protocol);

// Pure decode tables. Outcomes outside a table map to EveDetected.
RoundOutcome li_decode_table(BellKind measured);
RoundOutcome pingpong_decode_table(BellKind measured);
RoundOutcome cai_decode_table(BellKind chosen, BellKind measured);

struct DecodeResult {
    RoundOutcome outcome;
    BellKind bell = BellKind::PhiPlus;
};

struct LiQubits {
    QubitId home1;
    QubitId home2;
    QubitId travel;
};

/// GHZ on three fresh qubits, all owned by Alice until the travel qubit is sent.
LiQubits li_alice_prepare(Register& reg);

void bob_encode(Register& reg, QubitId travel, Bit bit, ProtocolKind protocol);

/// CNOT(control = home2, target = home1), then a Bell measurement of (home2, returned).
DecodeResult li_alice_decode(Register& reg, QubitId home1, QubitId home2, QubitId returned, Rng& rng);

/// Control with probability c. Throws ConfigError for c outside [0, 1].
BobMode pingpong_bob_mode(Rng& rng, double c);

struct ControlRoundResult {
    RoundOutcome outcome;
    ControlExchange exchange;
};

/// Bob measures his qubit and announces i; Alice measures home for j. i == j is a detection.
ControlRoundResult pingpong_control_round(Register& reg, QubitId home, QubitId travel,
                                          channel::ChannelFabric& channels, int round, Rng& rng);

DecodeResult pingpong_alice_decode(Register& reg, QubitId home, QubitId returned, Rng& rng);

struct CaiQubits {
    QubitId home;
    QubitId travel;
    BellKind chosen;  // private to Alice
};

CaiQubits cai_alice_prepare(Register& reg, Rng& rng);

DecodeResult cai_alice_decode(Register& reg, QubitId home, QubitId returned, BellKind chosen, Rng& rng);

/// Runs rounds until every message bit is delivered, the session aborts, or
/// loss retries run out. Each round uses a fresh Register; every crossing is
/// offered to the adversary.
SessionResult run_session(const SessionOptions& options, adversary::Adversary& adversary, Rng& rng);

} // namespace qkdsim::protocol
