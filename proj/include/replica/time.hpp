#pragma once

#include <cmath>
#include <cstdint>

namespace replica {

/// Session timestamps are whole microseconds so that differences of decimal
/// timestamps (e.g. 33.2 - 30.0) are exact.
using Micros = std::int64_t;

inline Micros to_micros(double seconds) noexcept { return static_cast<Micros>(std::llround(seconds * 1e6)); }
inline double to_seconds(Micros us) noexcept { return static_cast<double>(us) / 1e6; }

}  // namespace replica
