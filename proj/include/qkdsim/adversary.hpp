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
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "qkdsim/channel.hpp"
#include "qkdsim/quantum.hpp"
#include "qkdsim/types.hpp"

namespace qkdsim::adversary {

using quantum::QubitId;
using quantum::Register;

/// Qubits Eve holds for a single round. Cleared when the round ends.
struct RetainedQubits {
    std::optional<QubitId> captured;  // Alice's qubit taken on the forward leg
    std::optional<QubitId> epr_half;  // Eve's kept half of her own EPR pair
    std::optional<QubitId> ancilla;   // CNOT probe target
};

struct BasisCounts {
    std::uint64_t zeros = 0;
    std::uint64_t ones = 0;

    void add(Bit b) { (b == 0 ? zeros : ones) += 1; }
    std::uint64_t total() const { return zeros + ones; }
};

/// A ping-pong control bit Eve intercepted and rewrote.
struct ClassicalIntercept {
    int round = 0;
    Bit from_bob = 0;
    Bit forwarded = 0;
};

struct EveState {
    std::map<int, RetainedQubits> retained;
    std::vector<KeyBit> eve_key;
    BasisCounts basis_samples;
    std::vector<ClassicalIntercept> intercepted;
};

/// Eve, bound to one session. Taps are offered every crossing; end_round
/// runs after Alice has produced the round's outcome.
class Adversary : public channel::ChannelTap {
public:
    virtual std::string_view name() const = 0;

    /// Whether eve_key is meaningful for accuracy metrics.
    virtual bool records_key() const { return false; }

    virtual void end_round(channel::TapContext& ctx);

    const EveState& state() const { return state_; }

protected:
    EveState state_;
};

/// Does nothing. Receiver-visible behaviour is identical to no adversary.
class PassiveAdversary final : public Adversary {
public:
    std::string_view name() const override { return "passive"; }
};

/// Taps every crossing and forwards it untouched, leaving Observe events.
class ObservingAdversary final : public Adversary {
public:
    std::string_view name() const override { return "observe"; }
    channel::QuantumTapResult on_quantum(const channel::QuantumMessage& msg, channel::TapContext& ctx) override;
    channel::ClassicalTapResult on_classical(const channel::ClassicalMessage& msg, channel::TapContext& ctx) override;
};

enum class Legs : std::uint8_t { Forward, Return, Both };

/// Measures qubits in transit and forwards the collapsed qubit.
///
/// `eve_theta` is the angle of Eve's measurement basis in her own frame;
/// `world_offset` is where the parties' computational basis sits in that
/// frame. The simulator works in the parties' frame, so the measurement is
/// made at eve_theta - world_offset.
class InterceptResendAdversary final : public Adversary {
public:
    InterceptResendAdversary(double eve_theta, double world_offset = 0.0, Legs legs = Legs::Return);

    std::string_view name() const override { return "intercept"; }
    channel::QuantumTapResult on_quantum(const channel::QuantumMessage& msg, channel::TapContext& ctx) override;

    /// Measures `qubit` in the configured basis, records the outcome, returns the same qubit.
    QubitId intercept_resend_tap(QubitId qubit, Register& reg, Rng& rng);

private:
    double measure_angle_;
    Legs legs_;
};

/// Entangles an ancilla with each qubit Bob returns (CNOT, returned qubit as
/// control) and measures the ancilla once Alice has decoded.
class CnotProbeAdversary final : public Adversary {
public:
    std::string_view name() const override { return "cnot"; }
    bool records_key() const override { return true; }
    channel::QuantumTapResult on_quantum(const channel::QuantumMessage& msg, channel::TapContext& ctx) override;
    void end_round(channel::TapContext& ctx) override;

    QubitId cnot_probe_tap(int round, QubitId returned, Register& reg);
};

/// EPR man-in-the-middle. Eve swaps Alice's travel qubit for half of her
/// own Phi+ pair, reads Bob's Pauli off a Bell measurement when the qubit
/// comes back, replays it onto Alice's qubit and returns that to Alice. In
/// ping-pong control rounds she also rewrites Bob's announced bit with her
/// own measurement of Alice's qubit.
class EprMitmAdversary final : public Adversary {
public:
    std::string_view name() const override { return "mitm"; }
    bool records_key() const override { return true; }
    channel::QuantumTapResult on_quantum(const channel::QuantumMessage& msg, channel::TapContext& ctx) override;
    channel::ClassicalTapResult on_classical(const channel::ClassicalMessage& msg, channel::TapContext& ctx) override;

    QubitId forward_tap(int round, QubitId captured, Register& reg);
    QubitId return_tap(int round, QubitId returned, Register& reg, ProtocolKind protocol, Rng& rng);
    Bit classical_tap(int round, Bit i_from_bob, Register& reg, Rng& rng);
};

/// Eve's decode of her Bell outcome for a protocol. Throws InvariantViolation
/// for outcomes the protocol's encoder cannot produce from Phi+.
Bit mitm_decode(ProtocolKind protocol, quantum::BellKind outcome);

} // namespace qkdsim::adversary
