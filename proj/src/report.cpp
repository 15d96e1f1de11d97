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

#include "qkdsim/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qkdsim/errors.hpp"

namespace qkdsim::harness {

using nlohmann::json;

std::optional<ReportFormat> parse_format(std::string_view text)
{
    if (text == "json") {
        return ReportFormat::Json;
    }
    if (text == "csv") {
        return ReportFormat::Csv;
    }
    return std::nullopt;
}

std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json config_to_json(const ExperimentConfig& c)
{
    return json{
        {"protocol", to_string(c.protocol)},
        {"adversary", to_string(c.adversary)},
        {"intercept_theta", c.intercept_theta},
        {"intercept_legs", to_string(c.intercept_legs)},
        {"bits", c.bits},
        {"sessions", c.sessions},
        {"seed", c.seed},
        {"control_prob", c.control_prob},
        {"loss_prob", c.loss_prob},
        {"eve_removal_rate", c.eve_removal_rate},
        {"basis_offset", c.basis_offset},
        {"abort_policy", to_string(c.abort_policy)},
        {"max_retries", c.max_retries},
        {"probe_samples", c.probe_samples},
        {"transcript", c.include_transcripts},
    };
}

json event_to_json(const channel::TranscriptEvent& e)
{
    return json{
        {"round", e.round},
        {"party", to_string(e.party)},
        {"channel", channel::to_string(e.channel)},
        {"action", channel::to_string(e.action)},
        {"value", e.value ? json(*e.value) : json(nullptr)},
        {"detail", e.detail},
    };
}

json report_to_json(const RunReport& r)
{
    json doc;
    doc["config"] = config_to_json(r.config);
    doc["metrics"] = json{
        {"sessions_detected", r.sessions_detected},
        {"detection_rate", r.detection_rate},
        {"escape_rate", r.escape_rate},
        {"eve_accuracy", optional_number(r.eve_accuracy)},
        {"eve_accuracy_given_escape", optional_number(r.eve_accuracy_given_escape)},
        {"key_agreement", optional_number(r.key_agreement)},
        {"control_round_fraction", r.control_round_fraction},
        {"total_rounds", r.total_rounds},
        {"control_rounds", r.control_rounds},
        {"control_detected", r.control_detected},
        {"message_rounds", r.message_rounds},
        {"detected_rounds", r.detected_rounds},
        {"alice_bits", r.alice_bits},
        {"eve_bits", r.eve_bits},
        {"lost_qubit_count", r.lost_qubit_count},
        {"sessions_aborted", r.sessions_aborted},
        {"sessions_stalled", r.sessions_stalled},
    };
    if (r.basis_estimate) {
        const BasisReport& b = *r.basis_estimate;
        doc["basis_estimate"] = json{
            {"samples_per_batch", b.samples_per_batch},
            {"p0", b.p0},
            {"theta", b.theta},
            {"check_p0", b.check_p0},
            {"sign_flipped", b.sign_flipped},
            {"resolved_theta", b.resolved_theta},
        };
    }
    if (r.config.include_transcripts) {
        json sessions = json::array();
        for (const auto& t : r.transcripts) {
            json events = json::array();
            for (const auto& e : t.events) {
                events.push_back(event_to_json(e));
            }
            sessions.push_back(json{{"session", t.session}, {"events", std::move(events)}});
        }
        doc["transcripts"] = std::move(sessions);
    }
    return doc;
}

std::string csv_cell(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string{};
}

std::string csv_row(const RunReport& r)
{
    std::ostringstream out;
    out << to_string(r.config.protocol) << ',' << to_string(r.config.adversary) << ',' << r.config.bits << ','
        << r.config.sessions << ',' << r.config.seed << ',' << format_number(r.detection_rate) << ','
        << format_number(r.escape_rate) << ',' << csv_cell(r.eve_accuracy) << ',' << csv_cell(r.key_agreement)
        << ',' << format_number(r.control_round_fraction) << '\n';
    return out.str();
}

[[noreturn]] void bad(const std::string& what)
{
    throw ConfigError(what);
}

template <typename Enum, typename Parser>
Enum parse_enum(const json& v, std::string_view key, Parser parser)
{
    if (!v.is_string()) {
        bad(std::string(key) + " must be a string");
    }
    const auto parsed = parser(v.get<std::string>());
    if (!parsed) {
        bad("unknown " + std::string(key) + " '" + v.get<std::string>() + "'");
    }
    return *parsed;
}

double get_number(const json& v, std::string_view key)
{
    if (!v.is_number()) {
        bad(std::string(key) + " must be a number");
    }
    return v.get<double>();
}

std::uint64_t get_unsigned(const json& v, std::string_view key)
{
    if (!v.is_number_unsigned()) {
        bad(std::string(key) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::optional<double> get_optional_number(const json& v, std::string_view key)
{
    if (v.is_null()) {
        return std::nullopt;
    }
    return get_number(v, key);
}

void apply_config(const json& obj, ExperimentConfig& c)
{
    if (!obj.is_object()) {
        bad("config must be a JSON object");
    }
    for (const auto& [key, v] : obj.items()) {
        if (key == "protocol") {
            c.protocol = parse_enum<ProtocolKind>(v, key, parse_protocol);
        } else if (key == "adversary") {
            c.adversary = parse_enum<AdversaryKind>(v, key, parse_adversary);
        } else if (key == "intercept_theta") {
            c.intercept_theta = get_number(v, key);
        } else if (key == "intercept_legs") {
            c.intercept_legs = parse_enum<adversary::Legs>(v, key, parse_legs);
        } else if (key == "bits") {
            c.bits = get_unsigned(v, key);
        } else if (key == "sessions") {
            c.sessions = get_unsigned(v, key);
        } else if (key == "seed") {
            c.seed = get_unsigned(v, key);
        } else if (key == "control_prob") {
            c.control_prob = get_number(v, key);
        } else if (key == "loss_prob") {
            c.loss_prob = get_number(v, key);
        } else if (key == "eve_removal_rate") {
            c.eve_removal_rate = get_number(v, key);
        } else if (key == "basis_offset") {
            c.basis_offset = get_number(v, key);
        } else if (key == "abort_policy") {
            c.abort_policy = parse_enum<protocol::AbortPolicy>(v, key, parse_abort_policy);
        } else if (key == "max_retries") {
            c.max_retries = get_unsigned(v, key);
        } else if (key == "probe_samples") {
            c.probe_samples = get_unsigned(v, key);
        } else if (key == "transcript") {
            if (!v.is_boolean()) {
                bad("transcript must be true or false");
            }
            c.include_transcripts = v.get<bool>();
        } else {
            bad("unknown config key '" + key + "'");
        }
    }
}

template <typename Enum>
Enum lookup(const json& v, std::string_view key, std::initializer_list<Enum> all, std::string_view (*name)(Enum))
{
    if (!v.is_string()) {
        bad(std::string(key) + " must be a string");
    }
    const std::string s = v.get<std::string>();
    for (Enum e : all) {
        if (name(e) == s) {
            return e;
        }
    }
    bad("unknown " + std::string(key) + " '" + s + "'");
}

channel::TranscriptEvent event_from_json(const json& j)
{
    using channel::ChannelKind;
    using channel::EventAction;
    channel::TranscriptEvent e;
    e.round = j.at("round").get<int>();
    e.party = lookup<PartyId>(j.at("party"), "party", {PartyId::Alice, PartyId::Bob, PartyId::Eve},
                                  static_cast<std::string_view (*)(PartyId)>(&qkdsim::to_string));
    e.channel = lookup<ChannelKind>(j.at("channel"), "channel",
                                    {ChannelKind::Quantum, ChannelKind::Classical, ChannelKind::None},
                                    static_cast<std::string_view (*)(ChannelKind)>(&channel::to_string));
    e.action = lookup<EventAction>(j.at("action"), "action",
                                   {EventAction::Send, EventAction::Deliver, EventAction::Lose, EventAction::Capture,
                                    EventAction::Inject, EventAction::Observe, EventAction::Replace,
                                    EventAction::Outcome},
                                   static_cast<std::string_view (*)(EventAction)>(&channel::to_string));
    if (!j.at("value").is_null()) {
        e.value = j.at("value").get<int>();
    }
    e.detail = j.at("detail").get<std::string>();
    return e;
}

json parse_text(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        bad(std::string("malformed JSON: ") + err.what());
    }
}

} // namespace

std::string serialize_report(const RunReport& report, ReportFormat format)
{
    if (format == ReportFormat::Csv) {
        return std::string(kCsvHeader) + "\n" + csv_row(report);
    }
    return report_to_json(report).dump(2) + "\n";
}

std::string serialize_reports(const std::vector<RunReport>& reports, ReportFormat format)
{
    if (format == ReportFormat::Csv) {
        std::string out = std::string(kCsvHeader) + "\n";
        for (const auto& r : reports) {
            out += csv_row(r);
        }
        return out;
    }
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
    }
    return arr.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text)
{
    const json doc = parse_text(text);
    try {
        RunReport r;
        apply_config(doc.at("config"), r.config);
        const json& m = doc.at("metrics");
        r.sessions_detected = get_unsigned(m.at("sessions_detected"), "sessions_detected");
        r.detection_rate = get_number(m.at("detection_rate"), "detection_rate");
        r.escape_rate = get_number(m.at("escape_rate"), "escape_rate");
        r.eve_accuracy = get_optional_number(m.at("eve_accuracy"), "eve_accuracy");
        r.eve_accuracy_given_escape = get_optional_number(m.at("eve_accuracy_given_escape"), "eve_accuracy_given_escape");
        r.key_agreement = get_optional_number(m.at("key_agreement"), "key_agreement");
        r.control_round_fraction = get_number(m.at("control_round_fraction"), "control_round_fraction");
        r.total_rounds = get_unsigned(m.at("total_rounds"), "total_rounds");
        r.control_rounds = get_unsigned(m.at("control_rounds"), "control_rounds");
        r.control_detected = get_unsigned(m.at("control_detected"), "control_detected");
        r.message_rounds = get_unsigned(m.at("message_rounds"), "message_rounds");
        r.detected_rounds = get_unsigned(m.at("detected_rounds"), "detected_rounds");
        r.alice_bits = get_unsigned(m.at("alice_bits"), "alice_bits");
        r.eve_bits = get_unsigned(m.at("eve_bits"), "eve_bits");
        r.lost_qubit_count = get_unsigned(m.at("lost_qubit_count"), "lost_qubit_count");
        r.sessions_aborted = get_unsigned(m.at("sessions_aborted"), "sessions_aborted");
        r.sessions_stalled = get_unsigned(m.at("sessions_stalled"), "sessions_stalled");
        if (doc.contains("basis_estimate")) {
            const json& b = doc.at("basis_estimate");
            r.basis_estimate = BasisReport{get_unsigned(b.at("samples_per_batch"), "samples_per_batch"),
                                           get_number(b.at("p0"), "p0"),
                                           get_number(b.at("theta"), "theta"),
                                           get_number(b.at("check_p0"), "check_p0"),
                                           b.at("sign_flipped").get<bool>(),
                                           get_number(b.at("resolved_theta"), "resolved_theta")};
        }
        if (doc.contains("transcripts")) {
            for (const json& t : doc.at("transcripts")) {
                SessionTranscript st;
                st.session = get_unsigned(t.at("session"), "session");
                for (const json& e : t.at("events")) {
                    st.events.push_back(event_from_json(e));
                }
                r.transcripts.push_back(std::move(st));
            }
        }
        return r;
    } catch (const json::exception& err) {
        bad(std::string("malformed report: ") + err.what());
    }
}

ExperimentConfig parse_config_json(std::string_view text, const ExperimentConfig& base)
{
    const json doc = parse_text(text);
    ExperimentConfig c = base;
    if (doc.is_object() && doc.contains("config") && doc.contains("metrics")) {
        apply_config(doc.at("config"), c);
    } else {
        apply_config(doc, c);
    }
    return c;
}

} // namespace qkdsim::harness
