#pragma once

#include <functional>
#include <optional>

#include "mtem/linalg.hpp"
#include "mtem/model.hpp"

namespace mtem {

/// Truncation level h(dt), strictly decreasing with h(dt) -> infinity as
/// dt -> 0, defined on (0, delta_star].
struct TruncationPolicy {
    std::function<double(double)> h;
    std::function<double(double)> h_inverse; // may be empty for custom policies
    double delta_star = 1.0;
};

/// h(dt) = dt^{-exponent}; inverse R -> R^{-1/exponent}.
TruncationPolicy power_policy(double exponent, double delta_star = 1.0);

/// h(dt) evaluated with domain checks (0 < dt <= delta_star).
double truncation_level(const TruncationPolicy& policy, double dt);

struct TruncatedCoefficients {
    CoefficientSet base;
    double level = 1.0; // h(dt) for the step size in use
};

TruncatedCoefficients make_truncated(const CoefficientSet& base, const TruncationPolicy& policy, double dt);

/// The radial rescaling of the truncation operator. Inside the closed ball
/// |x| v |y| <= level nothing happens and a = 1; outside, inputs are pulled
/// back onto the sphere of radius level and a = level / (|x| v |y|).
struct TruncationFactor {
    double a = 1.0;
    Vec scaled_x;
    Vec scaled_y;
};

TruncationFactor truncation_factor(const Vec& x, const Vec& y, double level);

Vec truncated_drift(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t);
Mat truncated_diffusion(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t);

/// |f_trunc(x,y,t) - f_trunc(xb,yb,t)| / ( L(level,t) * (|x-xb| + |y-yb|) ).
/// The truncated coefficients are globally Lipschitz with constant five
/// times the declared envelope at radius level, so this ratio stays <= 5.
double lipschitz_witness(const TruncatedCoefficients& tc, const Vec& x, const Vec& y,
                         const Vec& xb, const Vec& yb, double t);

/// Residual of the dissipativity bound inherited by the truncated
/// coefficients: lambda1 and lambda2 are shifted by K/level^2. Nonpositive
/// (up to rounding) whenever the base coefficients satisfy the declared
/// Khasminskii-type condition.
double dissipativity_witness(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t,
                             double K, double lambda0, double lambda1, double lambda2);

} // namespace mtem
