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

#include "qkdsim/types.hpp"

namespace qkdsim {

std::string_view to_string(PartyId party)
{
    switch (party) {
    case PartyId::Alice: return "alice";
    case PartyId::Bob: return "bob";
    case PartyId::Eve: return "eve";
    }
    return "?";
}

std::string_view to_string(ProtocolKind protocol)
{
    switch (protocol) {
    case ProtocolKind::LiGhz: return "li";
    case ProtocolKind::PingPong: return "pingpong";
    case ProtocolKind::Cai: return "cai";
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view text)
{
    if (text == "li") {
        return ProtocolKind::LiGhz;
    }
    if (text == "pingpong") {
        return ProtocolKind::PingPong;
    }
    if (text == "cai") {
        return ProtocolKind::Cai;
    }
    return std::nullopt;
}

} // namespace qkdsim
