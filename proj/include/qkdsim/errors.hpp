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

#include <stdexcept>
#include <string>

namespace qkdsim {

/// Rejected experiment or session configuration. Raised before any work runs.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Misuse of the statevector register (capacity, consumed or repeated operands).
class QuantumError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A channel crossing that violates ownership rules.
class ChannelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An adversary was asked to act without the state it needs for the round.
class AdversaryError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Internal consistency check failed; indicates a simulator bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qkdsim
