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
#include <optional>
#include <string_view>

namespace qkdsim {

/// Protocol participants. Eve is never a protocol role, only a channel tap owner.
enum class PartyId : std::uint8_t { Alice, Bob, Eve };

/// Bit value carried by a measurement outcome or a key. Always 0 or 1.
using Bit = std::uint8_t;

/// One key bit tagged with the session round that produced it.
struct KeyBit {
    int round = 0;
    Bit bit = 0;

    friend bool operator==(const KeyBit&, const KeyBit&) = default;
};

enum class ProtocolKind : std::uint8_t { LiGhz, PingPong, Cai };

std::string_view to_string(PartyId party);

/// CLI spellings: "li", "pingpong", "cai".
std::string_view to_string(ProtocolKind protocol);
std::optional<ProtocolKind> parse_protocol(std::string_view text);

} // namespace qkdsim
