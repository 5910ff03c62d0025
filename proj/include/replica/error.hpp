#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace replica {

// Every failure surfaced by the library carries one of these codes. The
// names returned by to_string() are part of the wire protocol (Err.code).
enum class ErrorCode {
    // sim-core
    UnknownRobot,
    UnknownRoute,
    AutonomousFlightActive,
    RouteActive,
    NoBoxInRange,
    AlreadyCarrying,
    NotCarrying,
    VisionUnavailable,
    NotAtRouteStart,
    InvalidScene,
    // interaction
    InvalidTransition,
    PanelNotOpen,
    AffordanceNotAvailable,
    InvalidMagnitude,
    WrongModality,
    // orchestrator
    SceneNotReady,
    NotPending,
    NoSession,
    // metrics-stats
    MalformedLog,
    OutOfRangeItem,
    LengthMismatch,
    ZeroVariance,
    TooFewSamples,
    InvalidCounts,
    UnpairedSubject,
    MalformedQuestionnaire,
    // gateway
    MalformedMessage,
    BindFailure,
    InvalidConfig,
    ScriptStalled,
    ReplayDivergence,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    explicit Error(ErrorCode code)
        : std::runtime_error(std::string(to_string(code))), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace replica
