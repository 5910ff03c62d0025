#include "replica/gateway/protocol.hpp"

#include <array>
#include <cmath>

#include "replica/sim/json.hpp"

namespace replica::gateway {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedMessage, what); }

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing field '") + key + "'");
    return *it;
}

std::string str_field(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

double num_field(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number()) malformed(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int int_field(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

bool bool_field(const nlohmann::json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_boolean()) malformed(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

double opt_num(const nlohmann::json& j, const char* key) { return j.contains(key) ? num_field(j, key) : 0.0; }

// Timestamps travel as decimal seconds and come back as whole microseconds.
double micros_out(Micros t) { return to_seconds(t); }
Micros micros_in(const nlohmann::json& j, const char* key) { return to_micros(num_field(j, key)); }

constexpr std::array<std::pair<msg::JoyButton, std::string_view>, 4> kJoyButtons{{
    {msg::JoyButton::A, "A"},
    {msg::JoyButton::B, "B"},
    {msg::JoyButton::X, "X"},
    {msg::JoyButton::Y, "Y"},
}};

constexpr std::array<std::pair<msg::SessionCommand, std::string_view>, 3> kSessionCommands{{
    {msg::SessionCommand::Start, "start"},
    {msg::SessionCommand::Stop, "stop"},
    {msg::SessionCommand::Status, "status"},
}};

constexpr std::array kColors{interaction::AvatarColor::DarkGrey, interaction::AvatarColor::Green,
                             interaction::AvatarColor::Red, interaction::AvatarColor::Yellow};

interaction::AvatarColor parse_color(std::string_view s) {
    for (auto c : kColors) {
        if (interaction::to_string(c) == s) return c;
    }
    malformed("unknown color '" + std::string(s) + "'");
}

orchestrator::Channel parse_channel(std::string_view s) {
    for (auto c : {orchestrator::Channel::WorkTableScreen, orchestrator::Channel::HeadsetOverlay}) {
        if (orchestrator::to_string(c) == s) return c;
    }
    malformed("unknown channel '" + std::string(s) + "'");
}

ErrorCode parse_error_code(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::ReplayDivergence); ++i) {
        const auto code = static_cast<ErrorCode>(i);
        if (to_string(code) == s) return code;
    }
    malformed("unknown error code '" + std::string(s) + "'");
}

nlohmann::json state_json(const interaction::ControllerState& s) {
    nlohmann::json j = {{"state", interaction::state_name(s)}};
    if (const auto* r = interaction::bound_robot(s)) j["robot"] = r->str();
    return j;
}

interaction::ControllerState state_from_json(const nlohmann::json& j) {
    using namespace interaction::controller;
    const auto name = str_field(j, "state");
    if (name == "Hidden") return Hidden{};
    if (name == "PaletteShown") return PaletteShown{};
    if (name == "DeviceGrabbed") return DeviceGrabbed{RobotId(str_field(j, "robot"))};
    if (name == "PanelOpen") return PanelOpen{RobotId(str_field(j, "robot"))};
    malformed("unknown controller state '" + name + "'");
}

nlohmann::json vec_json(const sim::Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

sim::Vec3 vec_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) malformed("a position is [x, y, z]");
    for (const auto& c : j) {
        if (!c.is_number()) malformed("position components must be numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json body_json(const WireMessage& body) {
    using namespace msg;
    return std::visit(
        overloaded{
            [](const Hello& m) -> nlohmann::json { return {{"client", m.client}, {"protocol", m.protocol}}; },
            [](const Gesture& m) -> nlohmann::json { return to_json(m.event); },
            [](const PanelAction& m) -> nlohmann::json { return to_json(m.action); },
            [](const JoypadInput& m) -> nlohmann::json {
                nlohmann::json pressed = nlohmann::json::array();
                for (auto b : m.pressed) pressed.push_back(to_string(b));
                return {{"robot", m.robot.str()}, {"lx", m.lx}, {"ly", m.ly},
                        {"rx", m.rx},             {"ry", m.ry}, {"pressed", pressed}};
            },
            [](const QuestionnaireSubmit& m) -> nlohmann::json { return {{"answers", stats::to_json(m.answers)}}; },
            [](const SessionControl& m) -> nlohmann::json {
                std::string_view name;
                for (const auto& [c, n] : kSessionCommands) {
                    if (c == m.command) name = n;
                }
                return {{"command", name}, {"subject", m.subject}, {"session", m.session}};
            },
            [](const Snapshot& m) -> nlohmann::json { return {{"sim_time", m.sim_time}, {"bodies", m.bodies}}; },
            [](const AffordanceUpdate& m) -> nlohmann::json {
                auto j = state_json(m.state);
                j["affordances"] = to_json(m.affordances);
                j["arrows_shown"] = m.arrows_shown;
                j["camera_view"] = m.camera_view;
                return j;
            },
            [](const NotificationMsg& m) -> nlohmann::json {
                return {{"task_index", m.task_index},
                        {"task", orchestrator::to_string(m.task)},
                        {"robot", m.robot.str()},
                        {"channel", orchestrator::to_string(m.channel)},
                        {"issued_at", micros_out(m.issued_at)}};
            },
            [](const StateColor& m) -> nlohmann::json {
                return {{"robot", m.robot.str()},
                        {"op_state", interaction::to_string(m.state)},
                        {"color", interaction::to_string(m.color)}};
            },
            [](const CameraFrame& m) -> nlohmann::json {
                nlohmann::json items = nlohmann::json::array();
                for (const auto& it : m.items) {
                    items.push_back({{"id", it.id}, {"kind", it.kind}, {"position", vec_json(it.position)}, {"yaw", it.yaw}});
                }
                return {{"robot", m.robot.str()}, {"sim_time", m.sim_time}, {"items", items}};
            },
            [](const SessionEvent& m) -> nlohmann::json {
                return {{"event", m.event},
                        {"subject", m.subject},
                        {"session", m.session},
                        {"modality", orchestrator::to_string(m.modality)},
                        {"phase", m.phase},
                        {"t", micros_out(m.t)}};
            },
            [](const Ack& m) -> nlohmann::json { return {{"re", m.re}, {"info", m.info}}; },
            [](const Err& m) -> nlohmann::json {
                nlohmann::json j = {{"code", to_string(m.code)}, {"reason", m.reason}};
                if (m.re) j["re"] = *m.re;
                return j;
            },
        },
        body);
}

WireMessage body_from_json(std::string_view type, const nlohmann::json& j) {
    using namespace msg;
    if (type == "Hello") return Hello{j.contains("client") ? str_field(j, "client") : std::string(), int_field(j, "protocol")};
    if (type == "Gesture") return Gesture{gesture_from_json(j)};
    if (type == "PanelAction") return PanelAction{action_from_json(j)};
    if (type == "JoypadInput") {
        JoypadInput m;
        m.robot = RobotId(str_field(j, "robot"));
        m.lx = opt_num(j, "lx");
        m.ly = opt_num(j, "ly");
        m.rx = opt_num(j, "rx");
        m.ry = opt_num(j, "ry");
        if (j.contains("pressed")) {
            const auto& p = j["pressed"];
            if (!p.is_array()) malformed("'pressed' must be an array");
            for (const auto& b : p) {
                if (!b.is_string()) malformed("joypad buttons are strings");
                m.pressed.push_back(parse_joy_button(b.get<std::string>()));
            }
        }
        return m;
    }
    if (type == "QuestionnaireSubmit") {
        try {
            return QuestionnaireSubmit{stats::questionnaire_from_json(field(j, "answers"))};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedMessage) throw;
            malformed(std::string(to_string(e.code())) + ": " + e.what());
        }
    }
    if (type == "SessionControl") {
        SessionControl m;
        const auto name = str_field(j, "command");
        bool known = false;
        for (const auto& [c, n] : kSessionCommands) {
            if (n == name) {
                m.command = c;
                known = true;
            }
        }
        if (!known) malformed("unknown session command '" + name + "'");
        if (j.contains("subject")) m.subject = int_field(j, "subject");
        if (j.contains("session")) m.session = int_field(j, "session");
        return m;
    }
    if (type == "Snapshot") return Snapshot{num_field(j, "sim_time"), field(j, "bodies")};
    if (type == "AffordanceUpdate") {
        return AffordanceUpdate{state_from_json(j), affordance_set_from_json(field(j, "affordances")),
                                bool_field(j, "arrows_shown"), bool_field(j, "camera_view")};
    }
    if (type == "NotificationMsg") {
        try {
            return NotificationMsg{int_field(j, "task_index"), orchestrator::parse_task_kind(str_field(j, "task")),
                                   RobotId(str_field(j, "robot")), parse_channel(str_field(j, "channel")),
                                   micros_in(j, "issued_at")};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedMessage) throw;
            malformed(e.what());
        }
    }
    if (type == "StateColor") {
        return StateColor{RobotId(str_field(j, "robot")), interaction::parse_drone_op_state(str_field(j, "op_state")),
                          parse_color(str_field(j, "color"))};
    }
    if (type == "CameraFrame") {
        CameraFrame m{RobotId(str_field(j, "robot")), num_field(j, "sim_time"), {}};
        const auto& items = field(j, "items");
        if (!items.is_array()) malformed("'items' must be an array");
        for (const auto& it : items) {
            m.items.push_back({str_field(it, "id"), str_field(it, "kind"), vec_from(field(it, "position")), num_field(it, "yaw")});
        }
        return m;
    }
    if (type == "SessionEvent") {
        try {
            return SessionEvent{str_field(j, "event"),
                                int_field(j, "subject"),
                                int_field(j, "session"),
                                orchestrator::parse_modality(str_field(j, "modality")),
                                str_field(j, "phase"),
                                micros_in(j, "t")};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedMessage) throw;
            malformed(e.what());
        }
    }
    if (type == "Ack") {
        const auto& re = field(j, "re");
        if (!re.is_number_unsigned() && !re.is_number_integer()) malformed("'re' must be an integer");
        return Ack{re.get<std::uint64_t>(), j.value("info", nlohmann::json())};
    }
    if (type == "Err") {
        Err m;
        if (j.contains("re")) m.re = field(j, "re").get<std::uint64_t>();
        m.code = parse_error_code(str_field(j, "code"));
        m.reason = str_field(j, "reason");
        return m;
    }
    malformed("unknown message type '" + std::string(type) + "'");
}

}  // namespace

bool is_inbound(const WireMessage& m) noexcept { return m.index() <= 5; }

std::string_view type_name(const WireMessage& m) noexcept {
    static constexpr std::array<std::string_view, std::variant_size_v<WireMessage>> kNames{
        "Hello",           "Gesture",    "PanelAction",  "JoypadInput", "QuestionnaireSubmit",
        "SessionControl",  "Snapshot",   "AffordanceUpdate", "NotificationMsg", "StateColor",
        "CameraFrame",     "SessionEvent", "Ack",        "Err"};
    return kNames[m.index()];
}

nlohmann::json to_json(const Message& m) {
    auto j = body_json(m.body);
    j["type"] = type_name(m.body);
    if (is_inbound(m.body)) j["id"] = m.id;
    return j;
}

Message from_json(const nlohmann::json& j) {
    if (!j.is_object()) malformed("a message is a JSON object");
    try {
        Message m;
        m.body = body_from_json(str_field(j, "type"), j);
        if (is_inbound(m.body)) {
            const auto& id = field(j, "id");
            if (!id.is_number_unsigned() && !(id.is_number_integer() && id.get<std::int64_t>() >= 0)) {
                malformed("'id' must be a non-negative integer");
            }
            m.id = id.get<std::uint64_t>();
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        malformed(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedMessage) throw;
        malformed(e.what());
    }
}

std::string encode(const Message& m) { return to_json(m).dump(); }

Message decode(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(std::string("not JSON: ") + e.what());
    }
    return from_json(j);
}

std::optional<std::uint64_t> peek_id(std::string_view text) noexcept {
    try {
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_object() && j.contains("id") && j["id"].is_number_unsigned()) return j["id"].get<std::uint64_t>();
    } catch (...) {
    }
    return std::nullopt;
}

std::string_view to_string(msg::JoyButton b) noexcept {
    for (const auto& [button, name] : kJoyButtons) {
        if (button == b) return name;
    }
    return "A";
}

msg::JoyButton parse_joy_button(std::string_view s) {
    for (const auto& [button, name] : kJoyButtons) {
        if (name == s) return button;
    }
    malformed("unknown joypad button '" + std::string(s) + "'");
}

nlohmann::json to_json(const interaction::AffordanceSet& a) {
    nlohmann::json arrows = nlohmann::json::array();
    for (auto ar : a.arrows) arrows.push_back(interaction::to_string(ar));
    nlohmann::json buttons = nlohmann::json::array();
    for (const auto& b : a.buttons) buttons.push_back(interaction::to_string(b));
    return {{"arrows", arrows}, {"buttons", buttons}, {"arrows_visible", a.arrows_visible}};
}

interaction::AffordanceSet affordance_set_from_json(const nlohmann::json& j) {
    interaction::AffordanceSet a;
    const auto& arrows = field(j, "arrows");
    const auto& buttons = field(j, "buttons");
    if (!arrows.is_array() || !buttons.is_array()) malformed("arrows and buttons must be arrays");
    for (const auto& ar : arrows) a.arrows.insert(interaction::parse_arrow(ar.get<std::string>()));
    for (const auto& b : buttons) a.buttons.push_back(interaction::parse_button(b.get<std::string>()));
    a.arrows_visible = bool_field(j, "arrows_visible");
    return a;
}

nlohmann::json to_json(const interaction::GestureEvent& g) {
    using namespace interaction::gesture;
    nlohmann::json j = {{"gesture", interaction::gesture_name(g)}};
    if (const auto* grab = std::get_if<GrabDevice>(&g)) j["robot"] = grab->robot.str();
    if (const auto* near = std::get_if<HandNearRobot>(&g)) {
        j["robot"] = near->robot.str();
        j["near"] = near->near;
    }
    return j;
}

interaction::GestureEvent gesture_from_json(const nlohmann::json& j) {
    using namespace interaction::gesture;
    const auto name = str_field(j, "gesture");
    if (name == "PalmUp") return PalmUp{};
    if (name == "ThumbUp") return ThumbUp{};
    if (name == "GrabDevice") return GrabDevice{RobotId(str_field(j, "robot"))};
    if (name == "ReleaseDevice") return ReleaseDevice{};
    if (name == "StowDevice") return StowDevice{};
    if (name == "HandNearRobot") return HandNearRobot{RobotId(str_field(j, "robot")), bool_field(j, "near")};
    malformed("unknown gesture '" + name + "'");
}

nlohmann::json to_json(const interaction::Action& a) {
    if (const auto* b = std::get_if<interaction::ButtonAction>(&a)) return {{"button", interaction::to_string(b->button)}};
    nlohmann::json arrows = nlohmann::json::array();
    for (const auto& in : std::get<interaction::ArrowAction>(a).inputs) {
        arrows.push_back({{"arrow", interaction::to_string(in.arrow)}, {"magnitude", in.magnitude}});
    }
    return {{"arrows", arrows}};
}

interaction::Action action_from_json(const nlohmann::json& j) {
    const bool has_button = j.contains("button");
    const bool has_arrows = j.contains("arrows");
    if (has_button == has_arrows) malformed("a panel action has exactly one of 'button' or 'arrows'");
    if (has_button) return interaction::ButtonAction{interaction::parse_button(str_field(j, "button"))};
    const auto& arrows = j["arrows"];
    if (!arrows.is_array()) malformed("'arrows' must be an array");
    interaction::ArrowAction out;
    for (const auto& in : arrows) {
        out.inputs.push_back({interaction::parse_arrow(str_field(in, "arrow")), num_field(in, "magnitude")});
    }
    return out;
}

}  // namespace replica::gateway
