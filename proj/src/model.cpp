#include "mtem/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace mtem {

DelayFunction constant_delay(double tau) {
    if (tau < 0.0) throw std::invalid_argument("constant_delay: negative delay bound");
    DelayFunction d;
    d.eval = [tau](double) { return tau; };
    d.eta = 0.0;
    d.tau = tau;
    d.is_bounded = true;
    d.bound = tau;
    return d;
}

DelayFunction exp_approach_delay(double tau, double gain) {
    if (tau < 0.0) throw std::invalid_argument("exp_approach_delay: negative delay bound");
    if (gain < 0.0 || gain >= 1.0) throw std::invalid_argument("exp_approach_delay: gain must lie in [0,1)");
    DelayFunction d;
    d.eval = [tau, gain](double t) { return tau + gain * (1.0 - std::exp(-t)); };
    d.eta = gain;
    d.tau = tau;
    d.is_bounded = true;
    d.bound = tau + gain;
    return d;
}

DelayFunction pantograph_delay(double q) {
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("pantograph_delay: q must lie in (0,1]");
    DelayFunction d;
    d.eval = [q](double t) { return (1.0 - q) * t; };
    d.eta = 1.0 - q;
    d.tau = 0.0;
    d.is_bounded = false;
    d.bound.reset();
    return d;
}

namespace {

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

double eval_polynomial(const std::vector<PolyTerm>& terms, double x, double y) {
    double s = 0.0;
    for (const PolyTerm& t : terms) s += t.c * ipow(x, t.xpow) * ipow(y, t.ypow);
    return s;
}

CoefficientSet polynomial_coefficients(std::vector<PolyTerm> drift_terms,
                                       std::vector<PolyTerm> diffusion_sq_terms,
                                       double K, double lambda0, double lambda1, double lambda2,
                                       LipschitzEnvelope envelope) {
    if (K < 0.0) throw std::invalid_argument("polynomial_coefficients: K must be nonnegative");
    if (lambda1 <= 0.0) throw std::invalid_argument("polynomial_coefficients: lambda1 must be positive");
    if (lambda2 < 0.0) throw std::invalid_argument("polynomial_coefficients: lambda2 must be nonnegative");

    CoefficientSet c;
    c.state_dim = 1;
    c.noise_dim = 1;
    c.K = K;
    c.lambda0 = lambda0;
    c.lambda1 = lambda1;
    c.lambda2 = lambda2;
    c.drift = [terms = std::move(drift_terms)](const Vec& x, const Vec& y, double t) {
        return Vec{eval_polynomial(terms, x[0], y[0]) / (1.0 + t)};
    };
    c.diffusion = [terms = std::move(diffusion_sq_terms)](const Vec& x, const Vec& y, double t) {
        const double q = eval_polynomial(terms, x[0], y[0]) / (1.0 + t);
        Mat g(1, 1);
        // tiny negative values can appear from rounding when the square
        // vanishes; clamp those, let genuinely negative squares surface as NaN
        g(0, 0) = q > -1e-12 ? std::sqrt(std::max(q, 0.0)) : std::sqrt(q);
        return g;
    };
    c.lipschitz = [envelope](double R, double t) {
        return envelope.scale * (std::pow(R, envelope.power) + envelope.offset) / (1.0 + t);
    };
    return c;
}

InitialHistory constant_history(double value, double tau, int dim) {
    if (tau < 0.0) throw std::invalid_argument("constant_history: negative delay bound");
    if (dim <= 0) throw std::invalid_argument("constant_history: dimension must be positive");
    InitialHistory h;
    h.xi = [value, dim](double) { return Vec(static_cast<std::size_t>(dim), value); };
    h.tau = tau;
    return h;
}

} // namespace mtem
