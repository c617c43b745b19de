#pragma once

#include <optional>
#include <vector>

#include "mtem/grid.hpp"
#include "mtem/integrator.hpp"
#include "mtem/model.hpp"

namespace mtem {

enum class DelayRegime { bounded, unbounded };

struct EpsilonWindow {
    double lo = 0.0;
    double hi = 0.0; // both endpoints open

    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double eps) const { return eps > lo && eps < hi; }
};

/// Admissible epsilon range for the rate certificates. With
/// M0 = floor((1-eta)^-1) and margin = lambda1 - lambda2*(M0+1):
/// bounded regime (0, margin/(M0+2)), unbounded regime
/// (max{0, (margin-1)/(M0+2)}, margin/(M0+2)).
EpsilonWindow epsilon_window(double lambda1, double lambda2, double eta, DelayRegime regime);

/// Certified mean-square polynomial decay rate: E|X_k|^2 decays like
/// (1+k dt)^{-c_tilde} with c_tilde = min(c_tilde0, lambda0).
struct RateCertificate {
    DelayRegime regime = DelayRegime::bounded;
    double epsilon = 0.0;
    double c_tilde0 = 0.0;
    double c_tilde = 0.0;
    double residual = 0.0; // defining equation evaluated at c_tilde0
    EpsilonWindow window;
};

/// Bounded delay: c_tilde0 is the unique positive root of
///   F(C) = C - (lambda1 - eps) + (lambda2 + eps) * M1 * (1+tau)^C,
/// M1 = floor((1-eta)^-1) + 1, found by bracketed bisection.
RateCertificate solve_c_tilde_bounded(double lambda1, double lambda2, double eta, double tau, double epsilon,
                                      double lambda0);

/// Unbounded delay: closed form c_tilde0 = lambda1 - eps - (lambda2+eps)*M1,
/// always < 1 inside the admissible window.
RateCertificate c_tilde_unbounded(double lambda1, double lambda2, double eta, double epsilon, double lambda0);

/// Decay rate of the exact solution rather than of the scheme.
struct ExactRateCertificate {
    DelayRegime regime = DelayRegime::bounded;
    std::optional<double> gamma0; // root, bounded regime only
    double gamma_star = 0.0;
    double residual = 0.0;
};

/// Bounded delay: gamma0 solves
///   G(g) = g - lambda1 + lambda2 * max(1, (1+tau)^{g-1}) / (1-eta)
/// and gamma_star = min(lambda0, gamma0). Requires
/// lambda1 - lambda2/(1-eta) > 0.
ExactRateCertificate solve_gamma0_exact(double lambda1, double lambda2, double eta, double tau, double lambda0);

/// Unbounded delay: gamma_star = min(lambda0, lambda1 - lambda2/(1-eta), 1).
ExactRateCertificate exact_rate_unbounded(double lambda1, double lambda2, double eta, double lambda0);

/// Pathwise decay statistics, entries for k = 1..n_steps:
///   as_statistic  log|X_k| / log(1 + k dt)   (polynomial rate)
///   exp_statistic log|X_k| / (k dt)          (exponential rate)
/// States below the 1e-300 floor are marked -infinity, never NaN.
struct DecayStatistics {
    double dt = 0.0;
    long valid_from = 1; // first k with a defined statistic
    std::vector<double> as_statistic;
    std::vector<double> exp_statistic;

    double as_at(long k) const { return as_statistic.at(static_cast<std::size_t>(k - valid_from)); }
    double exp_at(long k) const { return exp_statistic.at(static_cast<std::size_t>(k - valid_from)); }
};

DecayStatistics decay_statistics(const PathRecord& path);

/// Finite-horizon stand-in for the limsup: max over the final tail_fraction
/// of the entries (ignoring -infinity markers unless all entries are).
double tail_max(const std::vector<double>& values, double tail_fraction = 0.1);

/// (1 + k dt)^C * mean_paths |X_k|^2 for k = 0..n_steps. Bounded in k for
/// C below the certified rate. All paths must share one grid.
std::vector<double> mean_square_statistic(const std::vector<PathRecord>& ensemble, double C);

/// Brute-force verification of the delayed-index counting bound: tabulates
/// a_j = j - floor(delta(j dt)/dt) for j = 0..k_max and finds the most
/// frequently hit value. The bound floor((1-eta)^-1) + 1 always holds for
/// admissible delays.
struct CountingReport {
    long max_count = 0;
    long bound = 0;
    long witness = 0; // an index value attaining max_count
};

CountingReport counting_check(const DelayFunction& delay, const SimulationGrid& grid, long k_max);

} // namespace mtem
