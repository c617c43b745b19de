#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtem/linalg.hpp"

namespace mtem {

/// Time-dependent delay delta(t) with delta'(t) <= eta < 1, so the delayed
/// clock t - delta(t) is strictly increasing.
struct DelayFunction {
    std::function<double(double)> eval;
    double eta = 0.0;          // Lipschitz-type bound, delta' <= eta < 1
    double tau = 0.0;          // delta(0), the history depth
    bool is_bounded = true;
    std::optional<double> bound; // sup delta when bounded

    double operator()(double t) const { return eval(t); }
};

DelayFunction constant_delay(double tau);
/// delta(t) = tau + gain * (1 - e^{-t}); eta = gain, bound = tau + gain.
DelayFunction exp_approach_delay(double tau, double gain);
/// Pantograph delay delta(t) = (1 - q) t with q in (0,1]; unbounded, tau = 0.
DelayFunction pantograph_delay(double q);

/// One monomial c * x^xpow * y^ypow of the scalar polynomial family.
struct PolyTerm {
    double c = 0.0;
    int xpow = 0;
    int ypow = 0;

    bool operator==(const PolyTerm&) const = default;
};

/// L(R, t) = scale * (R^power + offset) / (1 + t)
struct LipschitzEnvelope {
    double scale = 1.0;
    double power = 0.0;
    double offset = 0.0;
};

/// Drift f, diffusion g and the constants of the dissipativity condition
///   2 <x, f(x,y,t)> + |g(x,y,t)|_F^2
///     <= ( K (1+t)^{-lambda0} - lambda1 |x|^2 + lambda2 |y|^2 ) / (1 + t).
struct CoefficientSet {
    int state_dim = 1;
    int noise_dim = 1;
    std::function<Vec(const Vec&, const Vec&, double)> drift;
    std::function<Mat(const Vec&, const Vec&, double)> diffusion;
    double K = 0.0;
    double lambda0 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    /// Local Lipschitz envelope L(R, t); both coefficients are assumed
    /// L(R,t)-Lipschitz on the ball of radius R at time t.
    std::function<double(double, double)> lipschitz;
};

/// Scalar coefficients f = P(x,y)/(1+t), g = sqrt(Q(x,y)/(1+t)) with
/// polynomials P, Q given term by term. Q must stay nonnegative on the
/// region visited, which the dissipativity constants are there to ensure.
CoefficientSet polynomial_coefficients(std::vector<PolyTerm> drift_terms,
                                       std::vector<PolyTerm> diffusion_sq_terms,
                                       double K, double lambda0, double lambda1, double lambda2,
                                       LipschitzEnvelope envelope);

struct InitialHistory {
    std::function<Vec(double)> xi; // defined on [-tau, 0]
    double tau = 0.0;
};

InitialHistory constant_history(double value, double tau, int dim = 1);

struct SddeProblem {
    CoefficientSet coefficients;
    DelayFunction delay;
    InitialHistory history;
};

double eval_polynomial(const std::vector<PolyTerm>& terms, double x, double y);

} // namespace mtem
