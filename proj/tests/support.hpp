#pragma once

#include <cmath>

#include "cqbm/scenario.hpp"

namespace cqbm::test {

inline InternalConfig internal(const SystemConfig& c) { return to_internal(validate_config(c)); }
inline InternalConfig internal(const char* name) { return internal(preset(name)); }

inline InternalConfig without_forces(InternalConfig c) {
    c.force[0] = c.force[1] = ForceSpec{};
    return c;
}

inline double rel_diff(double a, double b, double floor = 1e-300) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace cqbm::test
