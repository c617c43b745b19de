#pragma once

#include <array>
#include <cstdint>

#include "mtem/linalg.hpp"

namespace mtem {

namespace detail {

/// Philox 4x32-10 block cipher round function (counter-based RNG).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

} // namespace detail

/// Counter-based source of Brownian increments. Each (path_index, step)
/// pair maps to a fixed counter block, so draws are independent of
/// evaluation order and of how paths are distributed over workers.
class BrownianSource {
public:
    BrownianSource(std::uint64_t master_seed, int dimension);

    /// One increment dB_k ~ N(0, dt * I_d) for the given path and step.
    Vec increment(std::uint32_t path_index, std::uint64_t step, double dt) const;

    std::uint64_t master_seed() const { return seed_; }
    int dimension() const { return dim_; }

private:
    std::uint64_t seed_;
    int dim_;
};

} // namespace mtem
