#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtem {

/// Thrown when a simulated state or a coefficient evaluation stops being
/// finite. Carries enough context to locate the failure in an ensemble.
class OverflowError : public std::runtime_error {
public:
    OverflowError(std::string what, long step, std::uint32_t path)
        : std::runtime_error(std::move(what)), step_index(step), path_index(path) {}

    long step_index;
    std::uint32_t path_index;
};

} // namespace mtem
