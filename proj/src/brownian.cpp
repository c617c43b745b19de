#include "mtem/brownian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace mtem {

namespace detail {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t MUL_A = 0xD2511F53u;
    constexpr std::uint32_t MUL_B = 0xCD9E8D57u;
    constexpr std::uint32_t WEYL_A = 0x9E3779B9u;
    constexpr std::uint32_t WEYL_B = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t prod_a = static_cast<std::uint64_t>(MUL_A) * counter[0];
        const std::uint64_t prod_b = static_cast<std::uint64_t>(MUL_B) * counter[2];
        counter = {static_cast<std::uint32_t>(prod_b >> 32) ^ counter[1] ^ key[0],
                   static_cast<std::uint32_t>(prod_b),
                   static_cast<std::uint32_t>(prod_a >> 32) ^ counter[3] ^ key[1],
                   static_cast<std::uint32_t>(prod_a)};
        key[0] += WEYL_A;
        key[1] += WEYL_B;
    }
    return counter;
}

namespace {

// (0, 1], never 0 so the log below is safe
double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

std::pair<double, double> gauss_pair(std::uint64_t bits0, std::uint64_t bits1) {
    const double u1 = to_unit(bits0);
    const double u2 = to_unit(bits1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace

} // namespace detail

BrownianSource::BrownianSource(std::uint64_t master_seed, int dimension) : seed_(master_seed), dim_(dimension) {
    if (dimension < 1) throw std::invalid_argument("BrownianSource: dimension must be positive");
}

Vec BrownianSource::increment(std::uint32_t path_index, std::uint64_t step, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("BrownianSource: dt must be positive");
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    const double scale = std::sqrt(dt);
    Vec out(static_cast<std::size_t>(dim_));
    for (int block = 0; 2 * block < dim_; ++block) {
        const std::array<std::uint32_t, 4> counter = {static_cast<std::uint32_t>(step),
                                                      static_cast<std::uint32_t>(step >> 32), path_index,
                                                      static_cast<std::uint32_t>(block)};
        const std::array<std::uint32_t, 4> bits = detail::philox4x32(counter, key);
        const std::uint64_t lo = (static_cast<std::uint64_t>(bits[0]) << 32) | bits[1];
        const std::uint64_t hi = (static_cast<std::uint64_t>(bits[2]) << 32) | bits[3];
        const auto [z0, z1] = detail::gauss_pair(lo, hi);
        out[static_cast<std::size_t>(2 * block)] = scale * z0;
        if (2 * block + 1 < dim_) out[static_cast<std::size_t>(2 * block + 1)] = scale * z1;
    }
    return out;
}

} // namespace mtem
