#include "replica/error.hpp"

namespace replica {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownRobot: return "UnknownRobot";
        case ErrorCode::UnknownRoute: return "UnknownRoute";
        case ErrorCode::AutonomousFlightActive: return "AutonomousFlightActive";
        case ErrorCode::RouteActive: return "RouteActive";
        case ErrorCode::NoBoxInRange: return "NoBoxInRange";
        case ErrorCode::AlreadyCarrying: return "AlreadyCarrying";
        case ErrorCode::NotCarrying: return "NotCarrying";
        case ErrorCode::VisionUnavailable: return "VisionUnavailable";
        case ErrorCode::NotAtRouteStart: return "NotAtRouteStart";
        case ErrorCode::InvalidScene: return "InvalidScene";
        case ErrorCode::InvalidTransition: return "InvalidTransition";
        case ErrorCode::PanelNotOpen: return "PanelNotOpen";
        case ErrorCode::AffordanceNotAvailable: return "AffordanceNotAvailable";
        case ErrorCode::InvalidMagnitude: return "InvalidMagnitude";
        case ErrorCode::WrongModality: return "WrongModality";
        case ErrorCode::SceneNotReady: return "SceneNotReady";
        case ErrorCode::NotPending: return "NotPending";
        case ErrorCode::NoSession: return "NoSession";
        case ErrorCode::MalformedLog: return "MalformedLog";
        case ErrorCode::OutOfRangeItem: return "OutOfRangeItem";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::InvalidCounts: return "InvalidCounts";
        case ErrorCode::UnpairedSubject: return "UnpairedSubject";
        case ErrorCode::MalformedQuestionnaire: return "MalformedQuestionnaire";
        case ErrorCode::MalformedMessage: return "MalformedMessage";
        case ErrorCode::BindFailure: return "BindFailure";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ScriptStalled: return "ScriptStalled";
        case ErrorCode::ReplayDivergence: return "ReplayDivergence";
    }
    return "Unknown";
}

}  // namespace replica
