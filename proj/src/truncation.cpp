#include "mtem/truncation.hpp"

#include <cmath>
#include <stdexcept>

#include "mtem/numeric.hpp"

namespace mtem {

TruncationPolicy power_policy(double exponent, double delta_star) {
    if (exponent <= 0.0) throw std::invalid_argument("power_policy: exponent must be positive");
    if (delta_star <= 0.0) throw std::invalid_argument("power_policy: delta_star must be positive");
    TruncationPolicy p;
    p.h = [exponent](double dt) { return std::pow(dt, -exponent); };
    p.h_inverse = [exponent](double R) { return std::pow(R, -1.0 / exponent); };
    p.delta_star = delta_star;
    return p;
}

double truncation_level(const TruncationPolicy& policy, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("truncation_level: dt must be positive");
    if (dt > policy.delta_star) throw std::invalid_argument("truncation_level: dt exceeds policy delta_star");
    const double level = policy.h(dt);
    if (!std::isfinite(level) || level <= 0.0)
        throw std::invalid_argument("truncation_level: policy returned a non-positive level");
    return level;
}

TruncatedCoefficients make_truncated(const CoefficientSet& base, const TruncationPolicy& policy, double dt) {
    return TruncatedCoefficients{base, truncation_level(policy, dt)};
}

TruncationFactor truncation_factor(const Vec& x, const Vec& y, double level) {
    if (!(level > 0.0)) throw std::invalid_argument("truncation_factor: level must be positive");
    if (!all_finite(x) || !all_finite(y)) throw std::invalid_argument("truncation_factor: non-finite state");
    const double mag = std::max(norm(x), norm(y));
    TruncationFactor f;
    if (mag <= level) { // boundary belongs to the identity branch
        f.a = 1.0;
        f.scaled_x = x;
        f.scaled_y = y;
    } else {
        f.a = level / mag;
        f.scaled_x = scaled(x, f.a);
        f.scaled_y = scaled(y, f.a);
    }
    return f;
}

Vec truncated_drift(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t) {
    const TruncationFactor f = truncation_factor(x, y, tc.level);
    if (f.a == 1.0) {
        Vec out = tc.base.drift(x, y, t);
        if (!all_finite(out)) throw std::runtime_error("truncated_drift: coefficient overflow");
        return out;
    }
    Vec out = scaled(tc.base.drift(f.scaled_x, f.scaled_y, t), 1.0 / f.a);
    if (!all_finite(out)) throw std::runtime_error("truncated_drift: coefficient overflow");
    return out;
}

Mat truncated_diffusion(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t) {
    const TruncationFactor f = truncation_factor(x, y, tc.level);
    if (f.a == 1.0) {
        Mat out = tc.base.diffusion(x, y, t);
        if (!all_finite(out.a)) throw std::runtime_error("truncated_diffusion: coefficient overflow");
        return out;
    }
    Mat out = scaled(tc.base.diffusion(f.scaled_x, f.scaled_y, t), 1.0 / f.a);
    if (!all_finite(out.a)) throw std::runtime_error("truncated_diffusion: coefficient overflow");
    return out;
}

double lipschitz_witness(const TruncatedCoefficients& tc, const Vec& x, const Vec& y,
                         const Vec& xb, const Vec& yb, double t) {
    const double dist = norm(sub(x, xb)) + norm(sub(y, yb));
    if (dist == 0.0) throw std::invalid_argument("lipschitz_witness: coincident inputs");
    const double envelope = tc.base.lipschitz(tc.level, t);
    if (!(envelope > 0.0)) throw std::invalid_argument("lipschitz_witness: envelope not positive");
    const double df = norm(sub(truncated_drift(tc, x, y, t), truncated_drift(tc, xb, yb, t)));
    return df / (envelope * dist);
}

double dissipativity_witness(const TruncatedCoefficients& tc, const Vec& x, const Vec& y, double t,
                             double K, double lambda0, double lambda1, double lambda2) {
    const Vec f = truncated_drift(tc, x, y, t);
    const Mat g = truncated_diffusion(tc, x, y, t);
    double gsq = 0.0;
    for (double v : g.a) gsq += v * v;
    const double lhs = 2.0 * dot(x, f) + gsq;
    const double shift = K / (tc.level * tc.level);
    const double nx = norm(x), ny = norm(y);
    const double rhs =
        (K * std::pow(1.0 + t, -lambda0) - (lambda1 - shift) * nx * nx + (lambda2 + shift) * ny * ny) / (1.0 + t);
    return lhs - rhs;
}

} // namespace mtem
