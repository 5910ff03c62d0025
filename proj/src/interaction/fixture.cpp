#include "replica/interaction/fixture.hpp"

#include <vector>

#include "replica/error.hpp"
#include "replica/interaction/affordance.hpp"
#include "replica/interaction/controller.hpp"

namespace replica::interaction {

namespace {

nlohmann::json affordance_json(const AffordanceSet& aff) {
    nlohmann::json arrows = nlohmann::json::array();
    for (auto a : aff.arrows) arrows.push_back(to_string(a));
    nlohmann::json buttons = nlohmann::json::array();
    for (const auto& b : aff.buttons) buttons.push_back(to_string(b));
    return {{"arrows", arrows}, {"buttons", buttons}, {"arrows_visible", aff.arrows_visible}};
}

}  // namespace

nlohmann::json conformance_fixture() {
    const RobotId r("robot");
    const std::vector<ControllerState> states{controller::Hidden{}, controller::PaletteShown{},
                                              controller::DeviceGrabbed{r}, controller::PanelOpen{r}};
    const std::vector<GestureEvent> events{gesture::PalmUp{},        gesture::ThumbUp{},    gesture::GrabDevice{r},
                                           gesture::ReleaseDevice{}, gesture::StowDevice{}, gesture::HandNearRobot{r, true}};

    nlohmann::json transitions = nlohmann::json::array();
    for (const auto& s : states) {
        for (const auto& e : events) {
            nlohmann::json row{{"from", state_name(s)}, {"event", gesture_name(e)}};
            try {
                row["to"] = state_name(lifecycle_step(s, e));
            } catch (const Error&) {
                row["to"] = nullptr;
            }
            transitions.push_back(std::move(row));
        }
    }

    nlohmann::json drone = nlohmann::json::array();
    for (auto st : kDroneOpStates) {
        for (bool autonomous : {false, true}) {
            for (bool vision : {false, true}) {
                auto row = affordance_json(affordances_for(st, autonomous, vision));
                row["state"] = to_string(st);
                row["color"] = to_string(avatar_color(st));
                row["autonomous_flight"] = autonomous;
                row["vision_available"] = vision;
                drone.push_back(std::move(row));
            }
        }
    }

    nlohmann::json agv = nlohmann::json::array();
    for (bool route_active : {false, true}) {
        for (bool forks : {false, true}) {
            sim::AgvBody body;
            body.fork_raised = forks;
            if (route_active) body.active_route = RouteId("R1");
            auto row = affordance_json(agv_affordances(body, {RouteId("R3")}));
            row["route_active"] = route_active;
            row["fork_raised"] = forks;
            row["routes"] = nlohmann::json::array({"R3"});
            agv.push_back(std::move(row));
        }
    }

    return {{"version", 1}, {"controller", {{"transitions", transitions}}}, {"drone", drone}, {"agv", agv}};
}

}  // namespace replica::interaction
