#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "replica/error.hpp"
#include "replica/interaction/affordance.hpp"
#include "replica/interaction/controller.hpp"
#include "replica/interaction/dispatch.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/orchestrator/session.hpp"
#include "replica/stats/sus.hpp"

namespace replica::gateway {

inline constexpr int kProtocolVersion = 1;

// Inbound (client -> service). Every inbound message carries a correlation id
// that the reply (Ack or Err) echoes in `re`.
namespace msg {

struct Hello {
    std::string client;
    int protocol = kProtocolVersion;
    friend bool operator==(const Hello&, const Hello&) = default;
};

struct Gesture {
    interaction::GestureEvent event;
    friend bool operator==(const Gesture&, const Gesture&) = default;
};

struct PanelAction {
    interaction::Action action;
    friend bool operator==(const PanelAction&, const PanelAction&) = default;
};

enum class JoyButton { A, B, X, Y };

/// Stick deflections in [-1, 1]; buttons are press edges.
struct JoypadInput {
    RobotId robot;
    double lx = 0.0;
    double ly = 0.0;
    double rx = 0.0;
    double ry = 0.0;
    std::vector<JoyButton> pressed;
    friend bool operator==(const JoypadInput&, const JoypadInput&) = default;
};

struct QuestionnaireSubmit {
    stats::Questionnaire answers;
    friend bool operator==(const QuestionnaireSubmit&, const QuestionnaireSubmit&) = default;
};

enum class SessionCommand { Start, Stop, Status };

struct SessionControl {
    SessionCommand command = SessionCommand::Status;
    int subject = 0;
    int session = 0;  // 0 or 1
    friend bool operator==(const SessionControl&, const SessionControl&) = default;
};

// Outbound (service -> client).

struct Snapshot {
    double sim_time = 0.0;
    nlohmann::json bodies;  // sim::bodies_json layout
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct AffordanceUpdate {
    interaction::ControllerState state;
    interaction::AffordanceSet affordances;  // empty unless a robot is bound
    bool arrows_shown = false;
    bool camera_view = false;
    friend bool operator==(const AffordanceUpdate&, const AffordanceUpdate&) = default;
};

struct NotificationMsg {
    int task_index = 0;
    orchestrator::TaskKind task = orchestrator::TaskKind::AgvRoute;
    RobotId robot;
    orchestrator::Channel channel = orchestrator::Channel::HeadsetOverlay;
    Micros issued_at = 0;
    friend bool operator==(const NotificationMsg&, const NotificationMsg&) = default;
};

struct StateColor {
    RobotId robot;
    interaction::DroneOpState state = interaction::DroneOpState::Freedrive;
    interaction::AvatarColor color = interaction::AvatarColor::DarkGrey;
    friend bool operator==(const StateColor&, const StateColor&) = default;
};

/// Scene geometry seen from the drone, in the drone's frame.
struct VisibleItem {
    std::string id;
    std::string kind;  // "box", "agv", "drone" or a zone kind
    sim::Vec3 position;
    double yaw = 0.0;
    friend bool operator==(const VisibleItem&, const VisibleItem&) = default;
};

struct CameraFrame {
    RobotId robot;
    double sim_time = 0.0;
    std::vector<VisibleItem> items;
    friend bool operator==(const CameraFrame&, const CameraFrame&) = default;
};

struct SessionEvent {
    std::string event;  // started, notified, activated, completed, finished, stopped
    int subject = 0;
    int session = 0;
    orchestrator::Modality modality = orchestrator::Modality::MrReplica;
    std::string phase;
    Micros t = 0;
    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct Ack {
    std::uint64_t re = 0;
    nlohmann::json info;  // null when there is nothing to report
    friend bool operator==(const Ack&, const Ack&) = default;
};

struct Err {
    std::optional<std::uint64_t> re;  // absent when the request id could not be read
    ErrorCode code = ErrorCode::MalformedMessage;
    std::string reason;
    friend bool operator==(const Err&, const Err&) = default;
};

}  // namespace msg

using WireMessage =
    std::variant<msg::Hello, msg::Gesture, msg::PanelAction, msg::JoypadInput, msg::QuestionnaireSubmit,
                 msg::SessionControl, msg::Snapshot, msg::AffordanceUpdate, msg::NotificationMsg, msg::StateColor,
                 msg::CameraFrame, msg::SessionEvent, msg::Ack, msg::Err>;

struct Message {
    std::uint64_t id = 0;  // correlation id, inbound only
    WireMessage body;
    friend bool operator==(const Message&, const Message&) = default;
};

bool is_inbound(const WireMessage& m) noexcept;
std::string_view type_name(const WireMessage& m) noexcept;

nlohmann::json to_json(const Message& m);
/// Throws Error(MalformedMessage) on any schema violation.
Message from_json(const nlohmann::json& j);

/// One message per frame, compact JSON text.
std::string encode(const Message& m);
Message decode(std::string_view text);

/// Best-effort correlation id of a frame that failed to decode.
std::optional<std::uint64_t> peek_id(std::string_view text) noexcept;

std::string_view to_string(msg::JoyButton b) noexcept;
msg::JoyButton parse_joy_button(std::string_view s);

nlohmann::json to_json(const interaction::AffordanceSet& a);
interaction::AffordanceSet affordance_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const interaction::GestureEvent& g);
interaction::GestureEvent gesture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const interaction::Action& a);
interaction::Action action_from_json(const nlohmann::json& j);

}  // namespace replica::gateway
