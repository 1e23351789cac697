// Copyright 2026 The qlansim Authors
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
#include <string_view>

namespace qlan {

enum class Errc {
    UnknownVertex,
    IdCollision,
    InvalidSize,
    MissingOwnership,
    InvalidB0,
    ImpossibleOutcome,
    Disconnected,
    IndexOutOfRange,
    DimensionMismatch,
    PlanMismatch,
    CentralizedPolicy,
    NotLinear,
    NotAlternating,
    NonLocalMerge,
    InteriorNotOrchestratorHeld,
    Unservable,
    InvalidParams,
    TruncationTooLow,
    ZeroProbability,
    DisconnectedMesh,
    RecipeUnavailable,
    ParseError,
    ConfigError,
    IoError,
    InvariantViolation,
};

constexpr std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::UnknownVertex: return "UnknownVertex";
        case Errc::IdCollision: return "IdCollision";
        case Errc::InvalidSize: return "InvalidSize";
        case Errc::MissingOwnership: return "MissingOwnership";
        case Errc::InvalidB0: return "InvalidB0";
        case Errc::ImpossibleOutcome: return "ImpossibleOutcome";
        case Errc::Disconnected: return "Disconnected";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::PlanMismatch: return "PlanMismatch";
        case Errc::CentralizedPolicy: return "CentralizedPolicy";
        case Errc::NotLinear: return "NotLinear";
        case Errc::NotAlternating: return "NotAlternating";
        case Errc::NonLocalMerge: return "NonLocalMerge";
        case Errc::InteriorNotOrchestratorHeld: return "InteriorNotOrchestratorHeld";
        case Errc::Unservable: return "Unservable";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::TruncationTooLow: return "TruncationTooLow";
        case Errc::ZeroProbability: return "ZeroProbability";
        case Errc::DisconnectedMesh: return "DisconnectedMesh";
        case Errc::RecipeUnavailable: return "RecipeUnavailable";
        case Errc::ParseError: return "ParseError";
        case Errc::ConfigError: return "ConfigError";
        case Errc::IoError: return "IoError";
        case Errc::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace qlan
