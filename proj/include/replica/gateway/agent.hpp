#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>

#include "replica/gateway/engine.hpp"
#include "replica/gateway/protocol.hpp"

namespace replica::gateway {

/// Parameters of the scripted reference operator. The delays only exercise
/// the pipeline; they say nothing about human behaviour.
struct ScriptedAgent {
    double reaction_delay_mr = 2.0;      // s from notification to first activating input
    double reaction_delay_joypad = 5.0;  // s
    double reaction_jitter = 0.5;        // s, uniform extra delay drawn from the run seed
    bool activates = true;               // false: never takes up a notified task
    bool align_before_release = true;    // use Align when vision is available
    double step_bound = 600.0;           // s of simulated time per session before ScriptStalled
};

/// Runs the agent policy against a live engine: at most one inbound message
/// per tick, and only when the desired action differs from the last one sent.
class AgentDriver {
public:
    AgentDriver(ScriptedAgent agent, std::uint64_t seed);

    /// Next message to send (its id is assigned by the caller), if any.
    std::optional<WireMessage> next(const Engine& engine);

    /// Deterministic questionnaire answers for a subject.
    stats::Questionnaire questionnaire(int subject);

    const ScriptedAgent& agent() const noexcept { return agent_; }

private:
    struct Intent {
        std::vector<interaction::ArrowInput> arrows;
        std::optional<interaction::Button> button;
        friend bool operator==(const Intent&, const Intent&) = default;
    };

    double uniform();
    std::optional<Intent> drone_intent(const sim::WorldState& w, const orchestrator::DroneLiftTask& task);
    std::optional<Intent> agv_intent(const sim::WorldState& w, const orchestrator::AgvRouteTask& task);
    std::optional<WireMessage> deliver(const Engine& engine, const RobotId& robot, const Intent& intent);

    ScriptedAgent agent_;
    std::mt19937_64 rng_;
    std::map<std::pair<int, int>, Micros> due_;  // (session, task) -> activation time
    std::optional<std::pair<RobotId, Intent>> last_;
    bool aligned_ = false;
};

}  // namespace replica::gateway
