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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkdsim/harness.hpp"

namespace qkdsim::harness {

enum class ReportFormat : std::uint8_t { Json, Csv };

std::optional<ReportFormat> parse_format(std::string_view text);

/// Fixed CSV header. Columns never change order; new metrics go to JSON only.
inline constexpr std::string_view kCsvHeader =
    "protocol,adversary,N,sessions,seed,detection_rate,escape_rate,eve_accuracy,key_agreement,control_round_fraction";

/// JSON: one document {"config", "metrics", ["basis_estimate"], ["transcripts"]}.
/// Doubles use the shortest representation that round-trips.
/// CSV: header line plus one row; absent metrics are empty cells, numbers
/// are printed with 12 significant digits.
std::string serialize_report(const RunReport& report, ReportFormat format);

/// JSON array of documents, or one CSV header followed by one row per report.
std::string serialize_reports(const std::vector<RunReport>& reports, ReportFormat format);

/// Inverse of serialize_report(..., Json). Throws ConfigError on malformed input.
RunReport parse_report_json(std::string_view text);

/// Reads a config file: a JSON object using the keys of the report's
/// "config" object, or a whole report document. Keys not present keep the
/// values from `base`. Throws ConfigError on unknown keys or bad values.
ExperimentConfig parse_config_json(std::string_view text, const ExperimentConfig& base = {});

/// Formats with 12 significant digits ("%.12g").
std::string format_number(double value);

} // namespace qkdsim::harness
