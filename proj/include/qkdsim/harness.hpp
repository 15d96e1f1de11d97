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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkdsim/adversary.hpp"
#include "qkdsim/channel.hpp"
#include "qkdsim/protocol.hpp"
#include "qkdsim/types.hpp"

namespace qkdsim::harness {

enum class AdversaryKind : std::uint8_t { Passive, InterceptResend, CnotProbe, EprMitm };

/// CLI spellings: passive, intercept, cnot, mitm.
std::string_view to_string(AdversaryKind kind);
std::optional<AdversaryKind> parse_adversary(std::string_view text);

std::string_view to_string(protocol::AbortPolicy policy);  // "first" | "end"
std::optional<protocol::AbortPolicy> parse_abort_policy(std::string_view text);

std::string_view to_string(adversary::Legs legs);  // "forward" | "return" | "both"
std::optional<adversary::Legs> parse_legs(std::string_view text);

struct ExperimentConfig {
    ProtocolKind protocol = ProtocolKind::LiGhz;
    AdversaryKind adversary = AdversaryKind::Passive;
    double intercept_theta = 0.0;  // Eve's basis angle for intercept-resend, in her frame
    adversary::Legs intercept_legs = adversary::Legs::Return;
    std::size_t bits = 16;
    std::size_t sessions = 1;
    std::uint64_t seed = 0;
    double control_prob = 0.25;
    double loss_prob = 0.0;
    double eve_removal_rate = 0.0;
    double basis_offset = 0.0;  // parties' basis relative to Eve's default, radians
    protocol::AbortPolicy abort_policy = protocol::AbortPolicy::AbortOnFirst;
    std::size_t max_retries = 100;
    std::size_t probe_samples = 10000;  // per calibration batch, EPR MITM only
    bool include_transcripts = false;

    /// Throws ConfigError describing the first invalid field.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::unique_ptr<adversary::Adversary> make_adversary(const ExperimentConfig& config);

/// Eve's basis calibration, run once per experiment before an EPR MITM.
struct BasisReport {
    std::uint64_t samples_per_batch = 0;
    double p0 = 0.5;
    double theta = 0.0;
    double check_p0 = 0.5;
    bool sign_flipped = false;
    double resolved_theta = 0.0;

    friend bool operator==(const BasisReport&, const BasisReport&) = default;
};

struct SessionTranscript {
    std::size_t session = 0;
    std::vector<channel::TranscriptEvent> events;

    friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

struct RunReport {
    ExperimentConfig config;

    std::size_t sessions_detected = 0;
    double detection_rate = 0.0;  // sessions with any detection / sessions
    double escape_rate = 1.0;
    std::optional<double> eve_accuracy;               // Eve bits matching Bob's, adversaries that keep a key
    std::optional<double> eve_accuracy_given_escape;  // same, restricted to rounds Alice decoded
    std::optional<double> key_agreement;              // Alice bits matching Bob's; absent if none decoded
    double control_round_fraction = 0.0;              // control / (control + message) rounds

    std::size_t total_rounds = 0;
    std::size_t control_rounds = 0;
    std::size_t control_detected = 0;
    std::size_t message_rounds = 0;
    std::size_t detected_rounds = 0;
    std::size_t alice_bits = 0;
    std::size_t eve_bits = 0;
    std::size_t lost_qubit_count = 0;
    std::size_t sessions_aborted = 0;
    std::size_t sessions_stalled = 0;

    std::optional<BasisReport> basis_estimate;
    std::vector<SessionTranscript> transcripts;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Random stream used for session s is Rng(seed, s); calibration uses a
/// stream no session index can reach.
inline constexpr std::uint64_t kCalibrationStream = ~std::uint64_t{0};

/// Deterministic in (config): identical configs give identical reports.
/// Sessions run on a small thread pool; aggregation only sums counts.
RunReport run_experiment(const ExperimentConfig& config);

/// Config with one parameter replaced. Parameter names follow the config
/// keys (bits, sessions, control_prob, loss_prob, eve_removal_rate,
/// basis_offset, intercept_theta, max_retries, probe_samples); the CLI flag
/// spellings (control-prob, loss, eve-removal, basis-offset) are accepted too.
/// Throws ConfigError for unknown names or values a field cannot hold.
ExperimentConfig with_parameter(const ExperimentConfig& base, std::string_view parameter, double value);

/// One report per value. Each value's seed is derived from (base seed,
/// parameter, value), so a report does not depend on its position in the list.
std::vector<RunReport> run_sweep(const ExperimentConfig& base, std::string_view parameter,
                                 const std::vector<double>& values);

} // namespace qkdsim::harness
