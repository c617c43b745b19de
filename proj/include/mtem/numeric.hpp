#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mtem {

/// Integer part of a nonnegative quantity that is often the result of an
/// expression like 1/(1-eta). Values within 1e-12 of an integer are treated
/// as that integer, so eta = 0.9 gives exactly 10 instead of 9.
inline long integer_part_guarded(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("integer_part_guarded: non-finite input");
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) return static_cast<long>(r);
    return static_cast<long>(std::floor(v));
}

/// floor(v) with a small forgiving nudge for time ratios such as delta(t)/dt
/// that land a few ulps below an integer.
inline long floor_with_guard(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("floor_with_guard: non-finite input");
    return static_cast<long>(std::floor(v + 1e-9));
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Pairwise summation. Order depends only on the element count, never on
/// thread scheduling, which keeps ensemble statistics reproducible.
inline double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

} // namespace mtem
