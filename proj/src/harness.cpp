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

#include "qkdsim/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "qkdsim/basis.hpp"
#include "qkdsim/errors.hpp"
#include "qkdsim/rng.hpp"

namespace qkdsim::harness {

std::string_view to_string(AdversaryKind kind)
{
    switch (kind) {
    case AdversaryKind::Passive: return "passive";
    case AdversaryKind::InterceptResend: return "intercept";
    case AdversaryKind::CnotProbe: return "cnot";
    case AdversaryKind::EprMitm: return "mitm";
    }
    return "?";
}

std::optional<AdversaryKind> parse_adversary(std::string_view text)
{
    for (auto kind : {AdversaryKind::Passive, AdversaryKind::InterceptResend, AdversaryKind::CnotProbe,
                      AdversaryKind::EprMitm}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(protocol::AbortPolicy policy)
{
    return policy == protocol::AbortPolicy::AbortOnFirst ? "first" : "end";
}

std::optional<protocol::AbortPolicy> parse_abort_policy(std::string_view text)
{
    if (text == "first") {
        return protocol::AbortPolicy::AbortOnFirst;
    }
    if (text == "end") {
        return protocol::AbortPolicy::RunToEnd;
    }
    return std::nullopt;
}

std::string_view to_string(adversary::Legs legs)
{
    switch (legs) {
    case adversary::Legs::Forward: return "forward";
    case adversary::Legs::Return: return "return";
    case adversary::Legs::Both: return "both";
    }
    return "?";
}

std::optional<adversary::Legs> parse_legs(std::string_view text)
{
    for (auto legs : {adversary::Legs::Forward, adversary::Legs::Return, adversary::Legs::Both}) {
        if (text == to_string(legs)) {
            return legs;
        }
    }
    return std::nullopt;
}

namespace {

bool is_probability(double p)
{
    return p >= 0.0 && p <= 1.0;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (bits < 1) {
        throw ConfigError("bits must be at least 1");
    }
    if (sessions < 1) {
        throw ConfigError("sessions must be at least 1");
    }
    if (!is_probability(control_prob)) {
        throw ConfigError("control-prob must be in [0, 1]");
    }
    if (protocol == ProtocolKind::PingPong && control_prob >= 1.0) {
        throw ConfigError("control-prob must be below 1 for ping-pong, or no message bit is ever sent");
    }
    if (!is_probability(loss_prob)) {
        throw ConfigError("loss must be in [0, 1]");
    }
    if (!is_probability(eve_removal_rate)) {
        throw ConfigError("eve-removal must be in [0, 1]");
    }
    if (!std::isfinite(basis_offset) || !std::isfinite(intercept_theta)) {
        throw ConfigError("angles must be finite");
    }
    if (adversary == AdversaryKind::EprMitm && probe_samples < 1) {
        throw ConfigError("probe-samples must be at least 1");
    }
}

std::unique_ptr<adversary::Adversary> make_adversary(const ExperimentConfig& config)
{
    switch (config.adversary) {
    case AdversaryKind::Passive: return std::make_unique<adversary::PassiveAdversary>();
    case AdversaryKind::InterceptResend:
        return std::make_unique<adversary::InterceptResendAdversary>(config.intercept_theta, config.basis_offset,
                                                                     config.intercept_legs);
    case AdversaryKind::CnotProbe: return std::make_unique<adversary::CnotProbeAdversary>();
    case AdversaryKind::EprMitm: return std::make_unique<adversary::EprMitmAdversary>();
    }
    throw InvariantViolation("unknown adversary kind");
}

namespace {

/// Per-session counts. Merging is plain addition, so the result does not
/// depend on which thread ran which session.
struct Tally {
    std::size_t sessions_detected = 0;
    std::size_t total_rounds = 0;
    std::size_t control_rounds = 0;
    std::size_t control_detected = 0;
    std::size_t message_rounds = 0;
    std::size_t detected_rounds = 0;
    std::size_t alice_bits = 0;
    std::size_t alice_matches = 0;
    std::size_t eve_bits = 0;
    std::size_t eve_matches = 0;
    std::size_t eve_escaped_bits = 0;
    std::size_t eve_escaped_matches = 0;
    std::size_t lost = 0;
    std::size_t aborted = 0;
    std::size_t stalled = 0;

    void merge(const Tally& o)
    {
        sessions_detected += o.sessions_detected;
        total_rounds += o.total_rounds;
        control_rounds += o.control_rounds;
        control_detected += o.control_detected;
        message_rounds += o.message_rounds;
        detected_rounds += o.detected_rounds;
        alice_bits += o.alice_bits;
        alice_matches += o.alice_matches;
        eve_bits += o.eve_bits;
        eve_matches += o.eve_matches;
        eve_escaped_bits += o.eve_escaped_bits;
        eve_escaped_matches += o.eve_escaped_matches;
        lost += o.lost;
        aborted += o.aborted;
        stalled += o.stalled;
    }
};

Tally tally_session(const protocol::SessionState& s, const adversary::Adversary& eve)
{
    Tally t;
    t.sessions_detected = s.detected() ? 1 : 0;
    t.total_rounds = s.rounds.size();
    t.control_rounds = s.control_rounds;
    t.message_rounds = s.message_rounds;
    t.detected_rounds = s.detections;
    t.lost = s.lost_count;
    t.aborted = s.aborted ? 1 : 0;
    t.stalled = s.stalled ? 1 : 0;

    std::map<int, Bit> bob;
    for (const KeyBit& k : s.bob_key) {
        bob[k.round] = k.bit;
    }
    std::map<int, bool> alice_decoded;
    for (const auto& r : s.rounds) {
        if (r.outcome.kind == protocol::OutcomeKind::ControlDetected) {
            ++t.control_detected;
        }
    }
    for (const KeyBit& k : s.alice_key) {
        alice_decoded[k.round] = true;
        ++t.alice_bits;
        const auto it = bob.find(k.round);
        if (it == bob.end()) {
            throw InvariantViolation("Alice decoded a round in which Bob sent nothing");
        }
        t.alice_matches += it->second == k.bit ? 1 : 0;
    }
    if (eve.records_key()) {
        for (const KeyBit& k : eve.state().eve_key) {
            const auto it = bob.find(k.round);
            if (it == bob.end()) {
                throw InvariantViolation("Eve recorded a bit for a round in which Bob sent nothing");
            }
            const bool match = it->second == k.bit;
            ++t.eve_bits;
            t.eve_matches += match ? 1 : 0;
            if (alice_decoded.contains(k.round)) {
                ++t.eve_escaped_bits;
                t.eve_escaped_matches += match ? 1 : 0;
            }
        }
    }
    return t;
}

std::vector<Bit> random_message(std::size_t bits, Rng& rng)
{
    std::vector<Bit> out(bits);
    for (auto& b : out) {
        b = static_cast<Bit>(rng.next_u64() >> 63);
    }
    return out;
}

struct SessionRun {
    Tally tally;
    std::vector<channel::TranscriptEvent> events;
};

SessionRun run_one(const ExperimentConfig& config, std::size_t session)
{
    Rng rng(config.seed, session);
    protocol::SessionOptions opts;
    opts.protocol = config.protocol;
    opts.message_bits = random_message(config.bits, rng);
    opts.control_prob = config.control_prob;
    opts.channel = {config.loss_prob, config.eve_removal_rate};
    opts.abort_policy = config.abort_policy;
    opts.max_retries = config.max_retries;

    auto eve = make_adversary(config);
    protocol::SessionResult result = protocol::run_session(opts, *eve, rng);
    SessionRun out;
    out.tally = tally_session(result.state, *eve);
    if (config.include_transcripts) {
        out.events = result.transcript.events();
    }
    return out;
}

std::optional<double> ratio(std::size_t num, std::size_t den)
{
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

RunReport run_experiment(const ExperimentConfig& config)
{
    config.validate();

    RunReport report;
    report.config = config;

    if (config.adversary == AdversaryKind::EprMitm) {
        Rng rng(config.seed, kCalibrationStream);
        const adversary::ProbeSource source{config.basis_offset, +1};
        const auto cal = adversary::calibrate_basis(source, config.probe_samples, rng);
        report.basis_estimate = BasisReport{config.probe_samples, cal.estimate.p0,       cal.estimate.theta,
                                            cal.check_p0,         cal.sign_flipped, cal.resolved_theta};
    }

    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, (config.sessions + 255) / 256);

    std::vector<Tally> tallies(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::vector<channel::TranscriptEvent>> events(config.include_transcripts ? config.sessions : 0);

    auto work = [&](std::size_t w) {
        try {
            for (std::size_t s = w; s < config.sessions; s += workers) {
                SessionRun run = run_one(config, s);
                tallies[w].merge(run.tally);
                if (config.include_transcripts) {
                    events[s] = std::move(run.events);
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    Tally total;
    for (const auto& t : tallies) {
        total.merge(t);
    }

    report.sessions_detected = total.sessions_detected;
    report.detection_rate = static_cast<double>(total.sessions_detected) / static_cast<double>(config.sessions);
    report.escape_rate = 1.0 - report.detection_rate;
    report.key_agreement = ratio(total.alice_matches, total.alice_bits);
    if (make_adversary(config)->records_key()) {
        report.eve_accuracy = ratio(total.eve_matches, total.eve_bits);
        report.eve_accuracy_given_escape = ratio(total.eve_escaped_matches, total.eve_escaped_bits);
    }
    report.control_round_fraction = ratio(total.control_rounds, total.control_rounds + total.message_rounds).value_or(0.0);
    report.total_rounds = total.total_rounds;
    report.control_rounds = total.control_rounds;
    report.control_detected = total.control_detected;
    report.message_rounds = total.message_rounds;
    report.detected_rounds = total.detected_rounds;
    report.alice_bits = total.alice_bits;
    report.eve_bits = total.eve_bits;
    report.lost_qubit_count = total.lost;
    report.sessions_aborted = total.aborted;
    report.sessions_stalled = total.stalled;

    if (config.include_transcripts) {
        report.transcripts.reserve(config.sessions);
        for (std::size_t s = 0; s < config.sessions; ++s) {
            report.transcripts.push_back({s, std::move(events[s])});
        }
    }
    return report;
}

namespace {

std::string canonical_parameter(std::string_view parameter)
{
    std::string name(parameter);
    std::replace(name.begin(), name.end(), '-', '_');
    if (name == "n" || name == "N") {
        return "bits";
    }
    if (name == "c") {
        return "control_prob";
    }
    if (name == "loss") {
        return "loss_prob";
    }
    if (name == "eve_removal") {
        return "eve_removal_rate";
    }
    return name;
}

std::size_t as_count(std::string_view name, double value)
{
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e15) {
        throw ConfigError(std::string(name) + " needs a non-negative integer value");
    }
    return static_cast<std::size_t>(value);
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h = (h ^ ch) * 0x100000001B3ULL;
    }
    return h;
}

} // namespace

ExperimentConfig with_parameter(const ExperimentConfig& base, std::string_view parameter, double value)
{
    const std::string name = canonical_parameter(parameter);
    ExperimentConfig c = base;
    if (name == "bits") {
        c.bits = as_count(name, value);
    } else if (name == "sessions") {
        c.sessions = as_count(name, value);
    } else if (name == "max_retries") {
        c.max_retries = as_count(name, value);
    } else if (name == "probe_samples") {
        c.probe_samples = as_count(name, value);
    } else if (name == "control_prob") {
        c.control_prob = value;
    } else if (name == "loss_prob") {
        c.loss_prob = value;
    } else if (name == "eve_removal_rate") {
        c.eve_removal_rate = value;
    } else if (name == "basis_offset") {
        c.basis_offset = value;
    } else if (name == "intercept_theta") {
        c.intercept_theta = value;
    } else {
        throw ConfigError("unknown sweep parameter '" + std::string(parameter) + "'");
    }
    const double normalized = value == 0.0 ? 0.0 : value;
    c.seed = derive_seed(base.seed, fnv1a(name) ^ std::bit_cast<std::uint64_t>(normalized));
    return c;
}

std::vector<RunReport> run_sweep(const ExperimentConfig& base, std::string_view parameter,
                                 const std::vector<double>& values)
{
    std::vector<ExperimentConfig> configs;
    configs.reserve(values.size());
    for (double v : values) {
        configs.push_back(with_parameter(base, parameter, v));
        configs.back().validate();
    }
    std::vector<RunReport> reports;
    reports.reserve(configs.size());
    for (const auto& c : configs) {
        reports.push_back(run_experiment(c));
    }
    return reports;
}

} // namespace qkdsim::harness
