#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "replica/error.hpp"
#include "replica/gateway/headless.hpp"
#include "replica/gateway/protocol.hpp"
#include "replica/interaction/affordance.hpp"
#include "replica/interaction/fixture.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/scene.hpp"
#include "replica/sim/json.hpp"
#include "replica/sim/ops.hpp"
#include "replica/stats/descriptive.hpp"
#include "replica/stats/student_t.hpp"
#include "replica/stats/sus.hpp"
#include "replica/stats/timings.hpp"

namespace py = pybind11;
using namespace replica;

namespace {

PyObject* g_error = nullptr;

using Triple = std::array<double, 3>;

sim::Vec3 vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple tup(const sim::Vec3& v) { return {v.x, v.y, v.z}; }

// JSON crosses the boundary as text; the Python package decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_replica, m) {
    m.doc() = "Core simulation, interaction, protocol and statistics of the replica teleoperation service";

    g_error = PyErr_NewException("replica.ReplicaError", PyExc_RuntimeError, nullptr);
    m.attr("ReplicaError") = py::handle(g_error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            auto inst = py::reinterpret_steal<py::object>(PyObject_CallFunction(g_error, "s", e.what()));
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(g_error, inst.ptr());
        }
    });

    py::class_<sim::WorldState>(m, "World")
        .def_property_readonly("sim_time", [](const sim::WorldState& w) { return w.sim_time; })
        .def_property_readonly("drones", [](const sim::WorldState& w) {
            std::vector<std::string> ids;
            for (const auto& [id, _] : w.drones) ids.push_back(id.str());
            return ids;
        })
        .def_property_readonly("agvs", [](const sim::WorldState& w) {
            std::vector<std::string> ids;
            for (const auto& [id, _] : w.agvs) ids.push_back(id.str());
            return ids;
        })
        .def("copy", [](const sim::WorldState& w) { return w; })
        .def("step", [](sim::WorldState& w, double dt) { sim::step(w, dt); }, py::arg("dt"))
        .def("command_drone",
             [](sim::WorldState& w, const std::string& id, Triple v, double yaw_rate) {
                 sim::command_drone(w, RobotId(id), vec(v), yaw_rate);
             },
             py::arg("drone"), py::arg("velocity"), py::arg("yaw_rate") = 0.0)
        .def("command_agv",
             [](sim::WorldState& w, const std::string& id, double v, double yaw_rate) {
                 sim::command_agv(w, RobotId(id), v, yaw_rate);
             },
             py::arg("agv"), py::arg("forward_speed"), py::arg("yaw_rate") = 0.0)
        .def("grasp", [](sim::WorldState& w, const std::string& id) { sim::grasp(w, RobotId(id)); })
        .def("release", [](sim::WorldState& w, const std::string& id) { sim::release(w, RobotId(id)); })
        .def("rotate_quarter", [](sim::WorldState& w, const std::string& id) { sim::rotate_quarter(w, RobotId(id)); })
        .def("align_to_pad", [](sim::WorldState& w, const std::string& id) { sim::align_to_pad(w, RobotId(id)); })
        .def("assign_route",
             [](sim::WorldState& w, const std::string& id, const std::string& route) {
                 sim::assign_route(w, RobotId(id), RouteId(route));
             })
        .def("autopilot_fly",
             [](sim::WorldState& w, const std::string& id, Triple target) { sim::autopilot_fly(w, RobotId(id), vec(target)); })
        .def("set_forks", [](sim::WorldState& w, const std::string& id, bool raised) { sim::set_forks(w, RobotId(id), raised); })
        .def("go_to_charge", [](sim::WorldState& w, const std::string& id) { sim::go_to_charge(w, RobotId(id)); })
        .def("drone_pose",
             [](const sim::WorldState& w, const std::string& id) {
                 const auto& d = w.drone(RobotId(id));
                 return py::make_tuple(tup(d.pose.position), d.pose.yaw);
             })
        .def("agv_pose",
             [](const sim::WorldState& w, const std::string& id) {
                 const auto& a = w.agv(RobotId(id));
                 return py::make_tuple(tup(a.pose.position), a.pose.yaw);
             })
        .def("box_pose",
             [](const sim::WorldState& w, const std::string& id) {
                 const auto& b = w.boxes.at(BoxId(id));
                 return py::make_tuple(tup(b.pose.position), b.pose.yaw);
             })
        .def("autonomous_flight", [](const sim::WorldState& w, const std::string& id) { return w.drone(RobotId(id)).autonomous_flight; })
        .def("drone_op_state",
             [](const sim::WorldState& w, const std::string& id) {
                 return std::string(interaction::to_string(interaction::drone_op_state(w, RobotId(id))));
             })
        .def("affordances_json",
             [](const sim::WorldState& w, const std::string& id) {
                 return dump(gateway::to_json(interaction::current_affordances(w, RobotId(id))));
             })
        .def("proximity",
             [](const sim::WorldState& w, const std::string& id, const std::string& kind) -> std::optional<std::string> {
                 auto z = sim::proximity(w, RobotId(id), sim::parse_zone_kind(kind));
                 if (!z) return std::nullopt;
                 return z->str();
             })
        .def("bodies_json", [](const sim::WorldState& w) { return dump(sim::bodies_json(w)); });

    m.def("default_scene_world", [] { return default_scene().world; });
    m.def("load_scene_world", [](const std::string& path) { return load_scene(path).world; });
    m.def("scene_world_from_json", [](const std::string& text) { return scene_from_json(nlohmann::json::parse(text)).world; });
    m.def("default_scene_json", [] { return dump(scene_to_json(default_scene())); });

    m.def("conformance_fixture_json", [] { return dump(interaction::conformance_fixture()); });
    m.def("latin_plan_json", [](int subjects, std::uint64_t seed) { return dump(orchestrator::to_json(orchestrator::latin_plan(subjects, seed))); },
          py::arg("subjects"), py::arg("seed"));

    m.def("student_t_cdf", &stats::student_t_cdf, py::arg("t"), py::arg("df"));
    m.def("student_t_two_sided", &stats::student_t_two_sided, py::arg("t"), py::arg("df"));
    m.def("mean_sd", [](const std::vector<double>& xs) {
        const auto r = stats::mean_sd(xs);
        return py::make_tuple(r.mean, r.sd);
    });
    m.def("paired_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = stats::paired_t_test(a, b);
        py::dict d;
        d["t"] = r.t_stat;
        d["df"] = r.df;
        d["p"] = r.p_two_sided;
        d["mean_diff"] = r.mean_diff;
        d["sd_diff"] = r.sd_diff;
        return d;
    });
    m.def("sus_score", [](const std::array<int, stats::kSusItems>& items) { return stats::sus_score({items}); });
    m.def("proportion", &stats::proportion, py::arg("count"), py::arg("total"));
    m.def("round_to", &stats::round_to, py::arg("value"), py::arg("decimals"));
    m.def("derive_timings_json", [](const std::string& log_text) {
        return dump(stats::to_json(stats::derive_timings(stats::parse_log(log_text))));
    });

    m.def("normalize_message", [](const std::string& text) { return gateway::encode(gateway::decode(text)); },
          "Decode a wire message and encode it again");
    m.def("run_headless_json",
          [](int subjects, std::uint64_t plan_seed, int subject, std::uint64_t seed) {
              const auto plans = orchestrator::latin_plan(subjects, plan_seed);
              if (subject < 1 || subject > static_cast<int>(plans.size())) {
                  throw Error(ErrorCode::InvalidConfig, "subject outside the plan");
              }
              return gateway::serialize(gateway::run_headless(default_scene(), plans[static_cast<std::size_t>(subject - 1)], {}, seed));
          },
          py::arg("subjects"), py::arg("plan_seed"), py::arg("subject"), py::arg("seed"));
    m.def("replay_json", [](const std::string& archive_text) {
        const auto r = gateway::replay(gateway::archive_from_json(nlohmann::json::parse(archive_text)));
        nlohmann::json timings = nlohmann::json::array();
        for (const auto& t : r.timings) timings.push_back(stats::to_json(t));
        return dump({{"verdict", r.verdict}, {"timings", timings}});
    });
    m.attr("PROTOCOL_VERSION") = gateway::kProtocolVersion;
}
