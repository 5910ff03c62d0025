#pragma once

#include <nlohmann/json.hpp>

namespace replica::interaction {

/// Machine-readable state-transition and affordance tables. The console and
/// the test suite both read data/conformance.json, which must equal this.
nlohmann::json conformance_fixture();

}  // namespace replica::interaction
