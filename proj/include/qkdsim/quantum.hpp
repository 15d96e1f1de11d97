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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qkdsim/types.hpp"
#include "qkdsim/rng.hpp"

namespace qkdsim::quantum {

using Amplitude = std::complex<double>;

/// Handle to a qubit allocated in a Register. Indices are allocation order.
struct QubitId {
    std::size_t index = 0;

    friend bool operator==(QubitId, QubitId) = default;
    friend auto operator<=>(QubitId, QubitId) = default;
};

/// The four Bell states, written as kets |q1 q2> of the measured pair:
///   PhiPlus  = (|00> + |11>)/sqrt2    PhiMinus = (|00> - |11>)/sqrt2
///   PsiPlus  = (|01> + |10>)/sqrt2    PsiMinus = (|01> - |10>)/sqrt2
/// The enumerator order is also the sampling order of measure_bell.
enum class BellKind : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellKind, 4> kAllBellKinds = {
    BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus};

enum class PauliOp : std::uint8_t { I, X, Z };

std::string_view to_string(BellKind kind);
std::string_view to_string(PauliOp op);

/// Outcome probabilities below this are treated as unreachable and never sampled.
inline constexpr double kUnreachableProbability = 1e-12;

/// Tolerance on the squared norm checked after every operation.
inline constexpr double kNormTolerance = 1e-9;

/// Joint statevector of every qubit allocated in one protocol round.
///
/// Basis indexing is little-endian: qubit k (the k-th allocated) is bit k of
/// the amplitude index. A ket written left to right as |q0 q1 q2> therefore
/// lives at index q0 + 2*q1 + 4*q2; e.g. |001> (only q2 set) is index 4.
///
/// Measured-out qubits stay in the vector but are marked consumed and can no
/// longer be operated on. Every mutating call verifies the norm and throws
/// InvariantViolation if it has drifted.
class Register {
public:
    static constexpr std::size_t kMaxQubits = 8;

    Register();

    QubitId alloc_qubit(Bit initial, PartyId owner);
    std::pair<QubitId, QubitId> prepare_bell(BellKind kind, PartyId owner_a, PartyId owner_b);
    std::array<QubitId, 3> prepare_ghz(PartyId owner_a, PartyId owner_b, PartyId owner_c);

    void apply_pauli(PauliOp op, QubitId q);
    void apply_cnot(QubitId control, QubitId target);

    /// Real rotation R(theta) = [[cos, -sin], [sin, cos]]; maps |0> to cos|0> + sin|1>.
    void apply_rotation(QubitId q, double theta);

    Bit measure_computational(QubitId q, Rng& rng);

    /// Measures in {cos t|0> + sin t|1>  (outcome 0),  -sin t|0> + cos t|1>  (outcome 1)}.
    /// Consumes exactly one draw, like measure_computational; theta == 0 is identical to it.
    Bit measure_rotated(QubitId q, double theta, Rng& rng);

    /// Projective measurement onto the Bell basis of (q1, q2). Both qubits become consumed.
    BellKind measure_bell(QubitId q1, QubitId q2, Rng& rng);

    /// Marks a qubit as gone (lost in transit). Equivalent to tracing it out.
    void discard(QubitId q);

    std::size_t qubit_count() const { return owners_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    double norm_squared() const;

    PartyId owner(QubitId q) const;
    void set_owner(QubitId q, PartyId owner);
    bool is_consumed(QubitId q) const;
    bool is_live(QubitId q) const;

    /// Born probability that measuring q in the computational basis gives 1.
    double probability_one(QubitId q) const;

private:
    void require_live(QubitId q) const;
    void require_capacity(std::size_t extra) const;
    void check_norm() const;
    Bit sample_binary(double p0, double p1, Rng& rng) const;

    std::vector<Amplitude> amplitudes_;
    std::vector<PartyId> owners_;
    std::vector<bool> consumed_;
};

} // namespace qkdsim::quantum
