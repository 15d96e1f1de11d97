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

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "doctest.h"
#include "qkdsim/errors.hpp"
#include "qkdsim/harness.hpp"
#include "qkdsim/report.hpp"
#include "stats.hpp"

using namespace qkdsim;
using namespace qkdsim::harness;

namespace {

ExperimentConfig config(ProtocolKind p, AdversaryKind a, std::size_t bits, std::size_t sessions, std::uint64_t seed)
{
    ExperimentConfig c;
    c.protocol = p;
    c.adversary = a;
    c.bits = bits;
    c.sessions = sessions;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("run_experiment examples")
{
    SUBCASE("honest Li run")
    {
        const auto r = run_experiment(config(ProtocolKind::LiGhz, AdversaryKind::Passive, 16, 200, 1));
        CHECK(r.detection_rate == 0.0);
        CHECK(r.escape_rate == 1.0);
        CHECK(r.key_agreement == 1.0);
        CHECK_FALSE(r.eve_accuracy);
        CHECK(r.alice_bits == 16 * 200);
        CHECK(r.control_round_fraction == 0.0);
    }
    SUBCASE("Li intercept-resend with N = 16 is almost surely detected")
    {
        const auto r = run_experiment(config(ProtocolKind::LiGhz, AdversaryKind::InterceptResend, 16, 500, 2));
        CHECK(r.detection_rate == 1.0);
        CHECK(r.sessions_aborted == 500);
    }
    SUBCASE("EPR MITM on ping-pong reads every bit unseen")
    {
        auto c = config(ProtocolKind::PingPong, AdversaryKind::EprMitm, 16, 200, 3);
        c.probe_samples = 2000;
        const auto r = run_experiment(c);
        CHECK(r.detection_rate == 0.0);
        CHECK(r.eve_accuracy == 1.0);
        CHECK(r.key_agreement == 1.0);
        REQUIRE(r.basis_estimate);
        CHECK(r.basis_estimate->samples_per_batch == 2000);
        CHECK(std::abs(r.control_round_fraction - 0.25) <= 0.02);
    }
    SUBCASE("invalid config")
    {
        auto c = config(ProtocolKind::PingPong, AdversaryKind::Passive, 4, 1, 0);
        c.control_prob = 1.0;
        CHECK_THROWS_AS(run_experiment(c), ConfigError);
        c = config(ProtocolKind::Cai, AdversaryKind::Passive, 0, 1, 0);
        CHECK_THROWS_AS(run_experiment(c), ConfigError);
        c = config(ProtocolKind::Cai, AdversaryKind::Passive, 4, 0, 0);
        CHECK_THROWS_AS(run_experiment(c), ConfigError);
        c = config(ProtocolKind::Cai, AdversaryKind::Passive, 4, 1, 0);
        c.eve_removal_rate = -0.5;
        CHECK_THROWS_AS(run_experiment(c), ConfigError);
    }
}

TEST_CASE("property: reports are reproducible and rates are complementary")
{
    for (auto p : {ProtocolKind::LiGhz, ProtocolKind::PingPong, ProtocolKind::Cai}) {
        for (auto a : {AdversaryKind::Passive, AdversaryKind::InterceptResend, AdversaryKind::CnotProbe, AdversaryKind::EprMitm}) {
            auto c = config(p, a, 6, 64, 42);
            c.probe_samples = 500;
            c.loss_prob = 0.1;
            c.abort_policy = protocol::AbortPolicy::RunToEnd;
            const auto r1 = run_experiment(c);
            const auto r2 = run_experiment(c);
            CHECK(r1 == r2);
            CHECK(serialize_report(r1, ReportFormat::Json) == serialize_report(r2, ReportFormat::Json));
            CHECK(r1.detection_rate + r1.escape_rate == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(r1.total_rounds == r1.control_rounds + r1.message_rounds + r1.lost_qubit_count);
        }
    }
}

TEST_CASE("sweep over N: Li intercept escape halves per bit")
{
    auto base = config(ProtocolKind::LiGhz, AdversaryKind::InterceptResend, 1, 20000, 5);
    base.abort_policy = protocol::AbortPolicy::RunToEnd;
    std::vector<double> ns{1, 2, 3, 4, 5, 6, 7, 8};
    const auto reports = run_sweep(base, "N", ns);
    REQUIRE(reports.size() == ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k) {
        CHECK(reports[k].config.bits == static_cast<std::size_t>(ns[k]));
        const double p = std::pow(0.5, ns[k]);
        CHECK(std::abs(reports[k].escape_rate - p) <= stats::three_sigma(p, 20000));
    }
}

TEST_CASE("sweep over control probability and loss")
{
    auto base = config(ProtocolKind::PingPong, AdversaryKind::Passive, 40, 100, 6);
    const auto rc = run_sweep(base, "control-prob", {0.1, 0.5});
    CHECK(rc[0].config.control_prob == 0.1);
    CHECK(rc[1].config.control_prob == 0.5);
    CHECK(rc[0].control_round_fraction < rc[1].control_round_fraction);

    const auto rl = run_sweep(base, "loss", {0.0, 0.3});
    CHECK(rl[0].lost_qubit_count == 0);
    CHECK(rl[1].lost_qubit_count > 0);
    CHECK(rl[1].key_agreement == 1.0);
}

TEST_CASE("property: sweep results do not depend on value order")
{
    auto base = config(ProtocolKind::Cai, AdversaryKind::CnotProbe, 4, 50, 7);
    const auto forward = run_sweep(base, "bits", {2, 4, 8});
    const auto backward = run_sweep(base, "bits", {8, 4, 2});
    CHECK(forward[0] == backward[2]);
    CHECK(forward[1] == backward[1]);
    CHECK(forward[2] == backward[0]);
}

TEST_CASE("with_parameter")
{
    const ExperimentConfig base;
    CHECK(with_parameter(base, "eve_removal", 0.2).eve_removal_rate == 0.2);
    CHECK(with_parameter(base, "basis-offset", 0.1).basis_offset == 0.1);
    CHECK(with_parameter(base, "c", 0.3).control_prob == 0.3);
    CHECK_THROWS_AS(with_parameter(base, "colour", 1.0), ConfigError);
    CHECK_THROWS_AS(with_parameter(base, "bits", 2.5), ConfigError);
    CHECK_THROWS_AS(with_parameter(base, "sessions", -1.0), ConfigError);
}

TEST_CASE("JSON report round trip")
{
    auto c = config(ProtocolKind::PingPong, AdversaryKind::EprMitm, 5, 20, 8);
    c.probe_samples = 300;
    c.control_prob = 0.35;
    c.include_transcripts = true;
    const auto r = run_experiment(c);
    REQUIRE(r.transcripts.size() == 20);
    const auto text = serialize_report(r, ReportFormat::Json);
    const auto back = parse_report_json(text);
    CHECK(back == r);
    CHECK(serialize_report(back, ReportFormat::Json) == text);
}

TEST_CASE("JSON layout")
{
    const auto r = run_experiment(config(ProtocolKind::LiGhz, AdversaryKind::Passive, 2, 3, 9));
    const auto doc = nlohmann::json::parse(serialize_report(r, ReportFormat::Json));
    CHECK(doc.contains("config"));
    CHECK(doc.contains("metrics"));
    CHECK_FALSE(doc.contains("transcripts"));
    CHECK(doc["metrics"]["eve_accuracy"].is_null());
    CHECK(doc["metrics"]["key_agreement"] == 1.0);
}

TEST_CASE("CSV layout")
{
    const auto reports = run_sweep(config(ProtocolKind::Cai, AdversaryKind::Passive, 3, 4, 10), "bits", {1, 2});
    const auto csv = serialize_reports(reports, ReportFormat::Csv);
    const std::string header =
        "protocol,adversary,N,sessions,seed,detection_rate,escape_rate,eve_accuracy,key_agreement,control_round_fraction";
    CHECK(header == kCsvHeader);
    CHECK(csv.rfind(header + "\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    // eve_accuracy is empty for an adversary that keeps no key.
    CHECK(csv.find("cai,passive,1,4,") != std::string::npos);
    CHECK(csv.find(",1,,1,0\n") != std::string::npos);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("config file parsing")
{
    const auto c = parse_config_json(R"({"protocol": "cai", "adversary": "cnot", "bits": 12, "loss_prob": 0.1,
                                         "abort_policy": "end", "transcript": true})");
    CHECK(c.protocol == ProtocolKind::Cai);
    CHECK(c.adversary == AdversaryKind::CnotProbe);
    CHECK(c.bits == 12);
    CHECK(c.loss_prob == 0.1);
    CHECK(c.abort_policy == protocol::AbortPolicy::RunToEnd);
    CHECK(c.include_transcripts);
    CHECK(c.sessions == ExperimentConfig{}.sessions);

    SUBCASE("a report document's config section is accepted")
    {
        const auto r = run_experiment(config(ProtocolKind::PingPong, AdversaryKind::Passive, 3, 2, 11));
        CHECK(parse_config_json(serialize_report(r, ReportFormat::Json)) == r.config);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(parse_config_json(R"({"protocl": "li"})"), ConfigError);
        CHECK_THROWS_AS(parse_config_json(R"({"protocol": "bb84"})"), ConfigError);
        CHECK_THROWS_AS(parse_config_json(R"({"bits": "many"})"), ConfigError);
        CHECK_THROWS_AS(parse_config_json("{not json"), ConfigError);
    }
}
