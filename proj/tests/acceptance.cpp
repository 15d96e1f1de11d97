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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qkdsim/basis.hpp"
#include "qkdsim/harness.hpp"
#include "qkdsim/report.hpp"
#include "quantum_fixtures.hpp"
#include "stats.hpp"

using namespace qkdsim;
using namespace qkdsim::harness;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ExperimentConfig make(ProtocolKind p, AdversaryKind a, std::size_t bits, std::size_t sessions, std::uint64_t seed)
{
    ExperimentConfig c;
    c.protocol = p;
    c.adversary = a;
    c.bits = bits;
    c.sessions = sessions;
    c.seed = seed;
    return c;
}

// Every config a criterion runs, replayed by the reproducibility check.
std::vector<ExperimentConfig> g_commands;

RunReport run(const ExperimentConfig& c)
{
    g_commands.push_back(c);
    return run_experiment(c);
}

bool exactly_one(const std::optional<double>& v) { return v && *v == 1.0; }

Verdict honest_correctness()
{
    Verdict v;
    Stopwatch clock;
    for (auto p : {ProtocolKind::LiGhz, ProtocolKind::PingPong, ProtocolKind::Cai}) {
        const auto r = run(make(p, AdversaryKind::Passive, 16, 1000, 101));
        const std::string name(to_string(p));
        v.require(exactly_one(r.key_agreement), name + " key_agreement != 1");
        v.require(r.detection_rate == 0.0, name + " detection_rate != 0");
    }
    const double t = clock.seconds();
    v.require(t < 5.0, fmt("runtime %.2f s >= 5 s", t));
    if (v.pass) {
        v.detail = fmt("3 protocols x 1000 sessions, agreement 1, detection 0, %.2f s", t);
    }
    return v;
}

Verdict li_intercept_escape()
{
    Verdict v;
    Stopwatch clock;
    std::string summary;
    for (std::size_t n : {1, 2, 4, 8}) {
        auto c = make(ProtocolKind::LiGhz, AdversaryKind::InterceptResend, n, 10000, 202);
        c.abort_policy = protocol::AbortPolicy::RunToEnd;
        const auto r = run(c);
        const double p = std::pow(0.5, static_cast<double>(n));
        const double tol = stats::three_sigma(p, c.sessions);
        v.require(std::abs(r.escape_rate - p) <= tol, fmt("n=%g escape %.5f vs %.5f", static_cast<double>(n), r.escape_rate, p));
        summary += fmt(" n=%g:%.4f", static_cast<double>(n), r.escape_rate);
    }
    const double t = clock.seconds();
    v.require(t < 30.0, fmt("runtime %.2f s >= 30 s", t));
    if (v.pass) {
        v.detail = "escape" + summary + fmt(", %.2f s", t);
    }
    return v;
}

Verdict li_cnot_probe()
{
    Verdict v;
    auto c = make(ProtocolKind::LiGhz, AdversaryKind::CnotProbe, 1, 10000, 303);
    c.abort_policy = protocol::AbortPolicy::RunToEnd;
    const auto r = run(c);
    const std::size_t escaped = r.config.sessions - r.sessions_detected;
    v.require(std::abs(r.detection_rate - 0.5) <= stats::three_sigma(0.5, c.sessions),
              fmt("detection %.4f", r.detection_rate));
    v.require(r.eve_accuracy_given_escape.has_value() && escaped > 0, "no escaped rounds");
    if (r.eve_accuracy_given_escape && escaped > 0) {
        v.require(std::abs(*r.eve_accuracy_given_escape - 0.5) <= stats::three_sigma(0.5, escaped),
                  fmt("accuracy given escape %.4f", *r.eve_accuracy_given_escape));
    }
    if (v.pass) {
        v.detail = fmt("10^4 rounds, detection %.4f, Eve accuracy given escape %.4f", r.detection_rate,
                       *r.eve_accuracy_given_escape);
    }
    return v;
}

Verdict mitm_perfect(ProtocolKind p, double control_prob)
{
    Verdict v;
    auto c = make(p, AdversaryKind::EprMitm, 16, 1000, 404 + static_cast<std::uint64_t>(p));
    c.control_prob = control_prob;
    const auto r = run(c);
    v.require(exactly_one(r.eve_accuracy), "eve_accuracy != 1");
    v.require(r.detection_rate == 0.0, "detection_rate != 0");
    v.require(exactly_one(r.key_agreement), "key_agreement != 1");
    if (p == ProtocolKind::PingPong) {
        v.require(r.control_rounds > 0, "no control rounds");
        v.require(r.control_detected == 0, "a control round had i == j");
    }
    if (v.pass) {
        v.detail = fmt("eve_accuracy 1, detection 0, key_agreement 1 over %g Eve bits", static_cast<double>(r.eve_bits));
        if (p == ProtocolKind::PingPong) {
            v.detail += fmt(", %g control rounds all i != j", static_cast<double>(r.control_rounds));
        }
    }
    return v;
}

Verdict control_statistics()
{
    Verdict v;
    std::string summary;
    for (auto [cp, sessions] : {std::pair{0.25, std::size_t{150}}, std::pair{0.5, std::size_t{100}}}) {
        auto c = make(ProtocolKind::PingPong, AdversaryKind::Passive, 50, sessions, 707);
        c.control_prob = cp;
        const auto r = run(c);
        const std::size_t rounds = r.control_rounds + r.message_rounds;
        v.require(rounds >= 9000, fmt("only %g rounds", static_cast<double>(rounds)));
        v.require(std::abs(r.control_round_fraction - cp) <= stats::three_sigma(cp, rounds),
                  fmt("c=%.2f fraction %.4f", cp, r.control_round_fraction));
        v.require(r.control_detected == 0, fmt("c=%.2f honest control round with i == j", cp));
        summary += fmt(" c=%.2f:%.4f (%g rounds)", cp, r.control_round_fraction, static_cast<double>(rounds));
    }
    if (v.pass) {
        v.detail = "control fraction" + summary + ", all control rounds i != j";
    }
    return v;
}

Verdict basis_estimation()
{
    Verdict v;
    const double truth = kPi / 12;
    auto c = make(ProtocolKind::PingPong, AdversaryKind::EprMitm, 1, 1, 808);
    c.basis_offset = truth;
    c.probe_samples = 10000;
    const auto r = run(c);
    v.require(r.basis_estimate.has_value(), "no basis estimate reported");
    if (r.basis_estimate) {
        const auto& b = *r.basis_estimate;
        v.require(std::abs(b.theta - truth) <= 0.02, fmt("estimate %.4f vs %.4f", b.theta, truth));
        v.require(!b.sign_flipped && std::abs(b.resolved_theta - truth) <= 0.02,
                  fmt("sign check resolved %.4f", b.resolved_theta));
    }
    // Probes on the other side of the offset mirror the first estimate; the check batch must flip it back.
    Rng rng(808, 1);
    const auto mirrored = adversary::calibrate_basis({truth, -1}, 10000, rng);
    v.require(mirrored.sign_flipped && std::abs(mirrored.resolved_theta - truth) <= 0.02,
              fmt("mirrored probes resolved %.4f", mirrored.resolved_theta));
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double theta = -kPi / 4 + (kPi / 2) * k / 99.0;
        worst = std::max(worst, std::abs(adversary::basis_offset_from_p0(adversary::basis_offset_p0(theta)) - theta));
    }
    v.require(worst <= 1e-12, fmt("inverse error %.3g", worst));
    if (v.pass) {
        v.detail = fmt("estimate %.4f (truth %.4f), sign kept; mirrored probes flipped; inverse error %.2g", r.basis_estimate->theta,
                       truth, worst);
    }
    return v;
}

Verdict quantum_core()
{
    using namespace fixtures;
    Verdict v;
    Rng rng(909, 0);
    double worst_norm = 0.0;
    double worst_inverse = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 4);
        Register reg;
        for (std::size_t i = 0; i < n; ++i) {
            reg.alloc_qubit(0, PartyId::Alice);
        }
        std::vector<std::size_t> ident(n);
        for (std::size_t i = 0; i < n; ++i) {
            ident[i] = i;
        }
        worst_norm = std::max(worst_norm, run_circuit(reg, random_circuit(rng, n, 12), ident));
        const oracle::Vec before = state_of(reg);
        const QubitId a{static_cast<std::size_t>(rng.next_u64() % n)};
        const QubitId b{(a.index + 1) % n};
        for (int op = 0; op < 3; ++op) {
            for (int twice = 0; twice < 2; ++twice) {
                if (op == 0) {
                    reg.apply_pauli(PauliOp::X, a);
                } else if (op == 1) {
                    reg.apply_pauli(PauliOp::Z, a);
                } else {
                    reg.apply_cnot(a, b);
                }
            }
            worst_inverse = std::max(worst_inverse, oracle::max_abs_diff(state_of(reg), before));
        }
        const Bit first = reg.measure_computational(a, rng);
        v.require(reg.measure_computational(a, rng) == first, "computational collapse not idempotent");
        worst_norm = std::max(worst_norm, std::abs(reg.norm_squared() - 1.0));
    }
    v.require(worst_norm <= 1e-9, fmt("norm deviation %.3g", worst_norm));
    v.require(worst_inverse <= 1e-9, fmt("self-inverse deviation %.3g", worst_inverse));

    double worst_collapse = 0.0;
    double worst_chi2_margin = -1e300;
    for (const auto& f : bell_fixtures()) {
        Register proto;
        f.build(proto);
        const oracle::Vec psi = state_of(proto);
        std::vector<double> probs(4);
        for (int k = 0; k < 4; ++k) {
            probs[static_cast<std::size_t>(k)] = oracle::expectation(oracle::bell_projector(k, f.q1, f.q2, f.qubits), psi);
        }
        std::vector<std::size_t> counts(4);
        for (std::size_t i = 0; i < 10000; ++i) {
            Register reg;
            f.build(reg);
            const auto k = static_cast<int>(reg.measure_bell(QubitId{f.q1}, QubitId{f.q2}, rng));
            counts[static_cast<std::size_t>(k)] += 1;
            worst_norm = std::max(worst_norm, std::abs(reg.norm_squared() - 1.0));
            if (i < 100) {
                // The post-measurement state lies in the observed projector's image.
                const double stay = oracle::expectation(oracle::bell_projector(k, f.q1, f.q2, f.qubits), state_of(reg));
                worst_collapse = std::max(worst_collapse, std::abs(stay - 1.0));
            }
        }
        std::size_t df = 0;
        const double chi2 = stats::chi2_statistic(counts, probs, &df);
        const double critical = df == 0 ? 0.0 : stats::chi2_critical_001(df);
        const bool ok = df == 0 ? std::isfinite(chi2) : chi2 < critical;
        v.require(ok, std::string(f.name) + fmt(" chi2 %.3f (df %g)", chi2, static_cast<double>(df)));
        if (df > 0) {
            worst_chi2_margin = std::max(worst_chi2_margin, chi2 - critical);
        }
    }
    v.require(worst_collapse <= 1e-9, fmt("Bell collapse deviation %.3g", worst_collapse));
    v.require(worst_norm <= 1e-9, fmt("norm deviation %.3g", worst_norm));
    if (v.pass) {
        v.detail = fmt("norm dev %.2g, self-inverse dev %.2g, 10 chi2 fixtures (worst margin %.2f)", worst_norm,
                       worst_inverse, worst_chi2_margin);
    }
    return v;
}

Verdict reproducibility()
{
    Verdict v;
    const auto commands = g_commands;
    for (const auto& c : commands) {
        const auto a = run_experiment(c);
        const auto b = run_experiment(c);
        for (auto format : {ReportFormat::Json, ReportFormat::Csv}) {
            v.require(serialize_report(a, format) == serialize_report(b, format),
                      std::string(to_string(c.protocol)) + "/" + std::string(to_string(c.adversary)) + " differs");
        }
    }
    const auto sweep_cfg = make(ProtocolKind::Cai, AdversaryKind::CnotProbe, 4, 200, 1010);
    v.require(serialize_reports(run_sweep(sweep_cfg, "bits", {1, 2, 3}), ReportFormat::Csv) ==
                  serialize_reports(run_sweep(sweep_cfg, "bits", {1, 2, 3}), ReportFormat::Csv),
              "sweep differs");
    if (v.pass) {
        v.detail = fmt("%g commands and one sweep byte-identical across reruns (JSON and CSV)", static_cast<double>(commands.size()));
    }
    return v;
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        Verdict (*check)();
    };
    const Criterion criteria[] = {
        {"honest correctness", honest_correctness},
        {"Li intercept-resend escape 2^-n", li_intercept_escape},
        {"Li CNOT probe", li_cnot_probe},
        {"EPR MITM Li", [] { return mitm_perfect(ProtocolKind::LiGhz, 0.0); }},
        {"EPR MITM ping-pong with classical interception", [] { return mitm_perfect(ProtocolKind::PingPong, 0.3); }},
        {"EPR MITM Cai", [] { return mitm_perfect(ProtocolKind::Cai, 0.0); }},
        {"ping-pong control statistics", control_statistics},
        {"basis estimation", basis_estimation},
        {"quantum core properties", quantum_core},
        {"reproducibility", reproducibility},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", index, c.name, v.detail.c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
        ++index;
    }
    return failures == 0 ? 0 : 1;
}
