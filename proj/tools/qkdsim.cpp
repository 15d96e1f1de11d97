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

// qkdsim command-line driver.
//
//   qkdsim run   [flags]                          one experiment, one report
//   qkdsim sweep [flags] --param NAME --values LIST   one report per value
//
// Exit codes: 0 success, 1 configuration error, 2 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkdsim/errors.hpp"
#include "qkdsim/harness.hpp"
#include "qkdsim/report.hpp"

namespace {

using qkdsim::ConfigError;
using namespace qkdsim::harness;

constexpr int kExitConfig = 1;
constexpr int kExitInternal = 2;

struct Flags {
    std::string config_path;
    std::string protocol;
    std::string adversary;
    std::size_t bits = 0;
    std::size_t sessions = 0;
    std::uint64_t seed = 0;
    double control_prob = 0.0;
    double loss = 0.0;
    double eve_removal = 0.0;
    double basis_offset = 0.0;
    double intercept_theta = 0.0;
    std::string intercept_legs;
    std::string abort_policy;
    std::size_t max_retries = 0;
    std::size_t probe_samples = 0;
    std::string format = "json";
    bool transcript = false;
    std::string out;

    std::string param;
    std::vector<double> values;
};

struct Options {
    CLI::Option* protocol;
    CLI::Option* adversary;
    CLI::Option* bits;
    CLI::Option* sessions;
    CLI::Option* seed;
    CLI::Option* control_prob;
    CLI::Option* loss;
    CLI::Option* eve_removal;
    CLI::Option* basis_offset;
    CLI::Option* intercept_theta;
    CLI::Option* intercept_legs;
    CLI::Option* abort_policy;
    CLI::Option* max_retries;
    CLI::Option* probe_samples;
    CLI::Option* transcript;
};

Options add_experiment_flags(CLI::App& cmd, Flags& f)
{
    Options o{};
    cmd.add_option("--config", f.config_path, "JSON config file; flags override its values");
    o.protocol = cmd.add_option("--protocol", f.protocol, "li | pingpong | cai");
    o.adversary = cmd.add_option("--adversary", f.adversary, "passive | intercept | cnot | mitm");
    o.bits = cmd.add_option("--bits", f.bits, "message bits per session (N)");
    o.sessions = cmd.add_option("--sessions", f.sessions, "number of sessions");
    o.seed = cmd.add_option("--seed", f.seed, "64-bit master seed");
    o.control_prob = cmd.add_option("--control-prob", f.control_prob, "ping-pong control-mode probability c");
    o.loss = cmd.add_option("--loss", f.loss, "channel loss probability per quantum crossing");
    o.eve_removal = cmd.add_option("--eve-removal", f.eve_removal, "extra probability that Eve drops a qubit");
    o.basis_offset = cmd.add_option("--basis-offset", f.basis_offset, "parties' basis relative to Eve's, radians");
    o.intercept_theta = cmd.add_option("--intercept-theta", f.intercept_theta, "intercept-resend basis angle, radians");
    o.intercept_legs = cmd.add_option("--intercept-legs", f.intercept_legs, "forward | return | both");
    o.abort_policy = cmd.add_option("--abort-policy", f.abort_policy, "first | end");
    o.max_retries = cmd.add_option("--max-retries", f.max_retries, "consecutive lost rounds before a session stalls");
    o.probe_samples = cmd.add_option("--probe-samples", f.probe_samples, "samples per basis-calibration batch");
    cmd.add_option("--format", f.format, "json | csv");
    o.transcript = cmd.add_flag("--transcript", f.transcript, "include per-session transcripts");
    cmd.add_option("--out", f.out, "output path (default stdout)");
    return o;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T, typename Parser>
T parse_or_throw(const std::string& text, const char* what, Parser parser)
{
    const auto v = parser(text);
    if (!v) {
        throw ConfigError(std::string("unknown ") + what + " '" + text + "'");
    }
    return *v;
}

ExperimentConfig build_config(const Flags& f, const Options& o)
{
    ExperimentConfig c;
    if (!f.config_path.empty()) {
        c = parse_config_json(read_file(f.config_path), c);
    }
    if (o.protocol->count() > 0) {
        c.protocol = parse_or_throw<qkdsim::ProtocolKind>(f.protocol, "protocol", qkdsim::parse_protocol);
    }
    if (o.adversary->count() > 0) {
        c.adversary = parse_or_throw<AdversaryKind>(f.adversary, "adversary", parse_adversary);
    }
    if (o.bits->count() > 0) c.bits = f.bits;
    if (o.sessions->count() > 0) c.sessions = f.sessions;
    if (o.seed->count() > 0) c.seed = f.seed;
    if (o.control_prob->count() > 0) c.control_prob = f.control_prob;
    if (o.loss->count() > 0) c.loss_prob = f.loss;
    if (o.eve_removal->count() > 0) c.eve_removal_rate = f.eve_removal;
    if (o.basis_offset->count() > 0) c.basis_offset = f.basis_offset;
    if (o.intercept_theta->count() > 0) c.intercept_theta = f.intercept_theta;
    if (o.intercept_legs->count() > 0) {
        c.intercept_legs = parse_or_throw<qkdsim::adversary::Legs>(f.intercept_legs, "intercept legs", parse_legs);
    }
    if (o.abort_policy->count() > 0) {
        c.abort_policy = parse_or_throw<qkdsim::protocol::AbortPolicy>(f.abort_policy, "abort policy",
                                                                       parse_abort_policy);
    }
    if (o.max_retries->count() > 0) c.max_retries = f.max_retries;
    if (o.probe_samples->count() > 0) c.probe_samples = f.probe_samples;
    if (o.transcript->count() > 0) c.include_transcripts = f.transcript;
    c.validate();
    return c;
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + out_path + "'");
    }
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Entanglement-based QKD protocol simulator and attack harness"};
    app.require_subcommand(1);

    Flags run_flags;
    CLI::App* run = app.add_subcommand("run", "run one experiment");
    const Options run_opts = add_experiment_flags(*run, run_flags);

    Flags sweep_flags;
    CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    const Options sweep_opts = add_experiment_flags(*sweep, sweep_flags);
    sweep->add_option("--param", sweep_flags.param, "config field to vary, e.g. bits, control-prob, loss")->required();
    sweep->add_option("--values", sweep_flags.values, "comma-separated values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            const auto format = parse_or_throw<ReportFormat>(run_flags.format, "format", parse_format);
            const ExperimentConfig config = build_config(run_flags, run_opts);
            emit(serialize_report(run_experiment(config), format), run_flags.out);
        } else {
            const auto format = parse_or_throw<ReportFormat>(sweep_flags.format, "format", parse_format);
            const ExperimentConfig config = build_config(sweep_flags, sweep_opts);
            emit(serialize_reports(run_sweep(config, sweep_flags.param, sweep_flags.values), format),
                 sweep_flags.out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
