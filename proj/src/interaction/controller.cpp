#include "replica/interaction/controller.hpp"

#include <optional>
#include <string>

#include "replica/error.hpp"

namespace replica::interaction {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

ControllerState lifecycle_step(const ControllerState& state, const GestureEvent& event) {
    using namespace controller;
    std::optional<ControllerState> next;
    if (std::holds_alternative<Hidden>(state) && std::holds_alternative<gesture::PalmUp>(event)) {
        next = PaletteShown{};
    } else if (std::holds_alternative<PaletteShown>(state) && std::holds_alternative<gesture::GrabDevice>(event)) {
        next = DeviceGrabbed{std::get<gesture::GrabDevice>(event).robot};
    } else if (const auto* g = std::get_if<DeviceGrabbed>(&state); g && std::holds_alternative<gesture::ReleaseDevice>(event)) {
        next = PanelOpen{g->robot};
    } else if (std::holds_alternative<PanelOpen>(state) && std::holds_alternative<gesture::StowDevice>(event)) {
        next = Hidden{};
    }
    if (!next) {
        throw Error(ErrorCode::InvalidTransition,
                    std::string(gesture_name(event)) + " is not accepted in state " + std::string(state_name(state)));
    }
    return *next;
}

bool camera_toggle(bool view, const GestureEvent& event) noexcept {
    return std::holds_alternative<gesture::ThumbUp>(event) ? !view : view;
}

std::string_view state_name(const ControllerState& state) noexcept {
    return std::visit(overloaded{
                          [](const controller::Hidden&) { return std::string_view("Hidden"); },
                          [](const controller::PaletteShown&) { return std::string_view("PaletteShown"); },
                          [](const controller::DeviceGrabbed&) { return std::string_view("DeviceGrabbed"); },
                          [](const controller::PanelOpen&) { return std::string_view("PanelOpen"); },
                      },
                      state);
}

std::string_view gesture_name(const GestureEvent& event) noexcept {
    return std::visit(overloaded{
                          [](const gesture::PalmUp&) { return std::string_view("PalmUp"); },
                          [](const gesture::ThumbUp&) { return std::string_view("ThumbUp"); },
                          [](const gesture::GrabDevice&) { return std::string_view("GrabDevice"); },
                          [](const gesture::ReleaseDevice&) { return std::string_view("ReleaseDevice"); },
                          [](const gesture::StowDevice&) { return std::string_view("StowDevice"); },
                          [](const gesture::HandNearRobot&) { return std::string_view("HandNearRobot"); },
                      },
                      event);
}

const RobotId* bound_robot(const ControllerState& state) noexcept {
    if (const auto* g = std::get_if<controller::DeviceGrabbed>(&state)) return &g->robot;
    if (const auto* p = std::get_if<controller::PanelOpen>(&state)) return &p->robot;
    return nullptr;
}

}  // namespace replica::interaction
