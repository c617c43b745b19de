#include "mtem/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "mtem/numeric.hpp"

namespace mtem {

namespace {

constexpr double kStateFloor = 1e-300; // below this a state counts as vanished
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// |x| with the sum of squares scaled by the largest component, so states far
// below 1 keep their decay information instead of underflowing to zero
double scaled_norm(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0 || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : x) {
        const double r = v / m;
        s += r * r;
    }
    return m * std::sqrt(s);
}

double check_positive_margin(double lambda1, double lambda2, double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("epsilon_window: eta must lie in [0,1)");
    const long m0 = integer_part_guarded(1.0 / (1.0 - eta));
    const double margin = lambda1 - lambda2 * static_cast<double>(m0 + 1);
    if (!(margin > 0.0)) throw std::invalid_argument("stability margin non-positive");
    return margin;
}

// strictly increasing scalar equation; bracket [0, hi] grown by doubling
template <class F>
double bisect_increasing(F&& f, const char* label) {
    if (!(f(0.0) < 0.0)) throw std::invalid_argument(std::string(label) + ": no positive root");
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && !(f(hi) > 0.0); ++i) hi *= 2.0;
    if (!(f(hi) > 0.0)) throw std::invalid_argument(std::string(label) + ": no positive root");
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

EpsilonWindow epsilon_window(double lambda1, double lambda2, double eta, DelayRegime regime) {
    const double margin = check_positive_margin(lambda1, lambda2, eta);
    const long m0 = integer_part_guarded(1.0 / (1.0 - eta));
    EpsilonWindow w;
    w.hi = margin / static_cast<double>(m0 + 2);
    w.lo = regime == DelayRegime::bounded ? 0.0 : std::max(0.0, (margin - 1.0) / static_cast<double>(m0 + 2));
    return w;
}

RateCertificate solve_c_tilde_bounded(double lambda1, double lambda2, double eta, double tau, double epsilon,
                                      double lambda0) {
    if (tau < 0.0) throw std::invalid_argument("solve_c_tilde_bounded: negative delay");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("solve_c_tilde_bounded: lambda0 must be positive");
    const EpsilonWindow window = epsilon_window(lambda1, lambda2, eta, DelayRegime::bounded);
    if (!window.contains(epsilon))
        throw std::invalid_argument("solve_c_tilde_bounded: epsilon outside admissible window");

    const double m1 = static_cast<double>(integer_part_guarded(1.0 / (1.0 - eta)) + 1);
    const auto F = [&](double c) {
        return c - (lambda1 - epsilon) + (lambda2 + epsilon) * m1 * std::pow(1.0 + tau, c);
    };
    const double root = bisect_increasing(F, "solve_c_tilde_bounded");

    RateCertificate cert;
    cert.regime = DelayRegime::bounded;
    cert.epsilon = epsilon;
    cert.c_tilde0 = root;
    cert.c_tilde = std::min(root, lambda0);
    cert.residual = F(root);
    cert.window = window;
    return cert;
}

RateCertificate c_tilde_unbounded(double lambda1, double lambda2, double eta, double epsilon, double lambda0) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("c_tilde_unbounded: lambda0 must be positive");
    const EpsilonWindow window = epsilon_window(lambda1, lambda2, eta, DelayRegime::unbounded);
    if (!window.contains(epsilon))
        throw std::invalid_argument("c_tilde_unbounded: epsilon outside admissible window");

    const double m1 = static_cast<double>(integer_part_guarded(1.0 / (1.0 - eta)) + 1);
    const double c0 = lambda1 - epsilon - (lambda2 + epsilon) * m1;
    if (!(c0 > 0.0 && c0 < 1.0)) // guaranteed by the window, kept as a tripwire
        throw std::logic_error("c_tilde_unbounded: closed form left (0,1)");

    RateCertificate cert;
    cert.regime = DelayRegime::unbounded;
    cert.epsilon = epsilon;
    cert.c_tilde0 = c0;
    cert.c_tilde = std::min(c0, lambda0);
    cert.residual = 0.0; // closed form, nothing to solve
    cert.window = window;
    return cert;
}

ExactRateCertificate solve_gamma0_exact(double lambda1, double lambda2, double eta, double tau, double lambda0) {
    if (tau < 0.0) throw std::invalid_argument("solve_gamma0_exact: negative delay");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("solve_gamma0_exact: lambda0 must be positive");
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("solve_gamma0_exact: eta must lie in [0,1)");
    if (!(lambda1 - lambda2 / (1.0 - eta) > 0.0))
        throw std::invalid_argument("solve_gamma0_exact: stability margin non-positive");

    const auto G = [&](double g) {
        return g - lambda1 + lambda2 * std::max(1.0, std::pow(1.0 + tau, g - 1.0)) / (1.0 - eta);
    };
    const double root = bisect_increasing(G, "solve_gamma0_exact");

    ExactRateCertificate cert;
    cert.regime = DelayRegime::bounded;
    cert.gamma0 = root;
    cert.gamma_star = std::min(lambda0, root);
    cert.residual = G(root);
    return cert;
}

ExactRateCertificate exact_rate_unbounded(double lambda1, double lambda2, double eta, double lambda0) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("exact_rate_unbounded: lambda0 must be positive");
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("exact_rate_unbounded: eta must lie in [0,1)");
    const double margin = lambda1 - lambda2 / (1.0 - eta);
    if (!(margin > 0.0)) throw std::invalid_argument("exact_rate_unbounded: stability margin non-positive");

    ExactRateCertificate cert;
    cert.regime = DelayRegime::unbounded;
    cert.gamma0.reset();
    cert.gamma_star = std::min({lambda0, margin, 1.0});
    cert.residual = 0.0;
    return cert;
}

DecayStatistics decay_statistics(const PathRecord& path) {
    if (path.grid.n_steps < 2) throw std::invalid_argument("decay_statistics: need at least 2 forward steps");
    DecayStatistics s;
    s.dt = path.grid.dt;
    s.valid_from = 1;
    s.as_statistic.resize(static_cast<std::size_t>(path.grid.n_steps));
    s.exp_statistic.resize(static_cast<std::size_t>(path.grid.n_steps));
    for (long k = 1; k <= path.grid.n_steps; ++k) {
        const Vec x = lookup_state(path, k);
        const double mag = scaled_norm(x);
        const double t = path.grid.time_at(k);
        if (mag < kStateFloor) {
            s.as_statistic[static_cast<std::size_t>(k - 1)] = kNegInf;
            s.exp_statistic[static_cast<std::size_t>(k - 1)] = kNegInf;
        } else {
            const double lg = std::log(mag);
            s.as_statistic[static_cast<std::size_t>(k - 1)] = lg / std::log1p(t);
            s.exp_statistic[static_cast<std::size_t>(k - 1)] = lg / t;
        }
    }
    return s;
}

double tail_max(const std::vector<double>& values, double tail_fraction) {
    if (values.empty()) throw std::invalid_argument("tail_max: empty input");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("tail_max: fraction must lie in (0,1]");
    const std::size_t count = std::max<std::size_t>(1, static_cast<std::size_t>(values.size() * tail_fraction));
    double best = kNegInf;
    for (std::size_t i = values.size() - count; i < values.size(); ++i) best = std::max(best, values[i]);
    return best;
}

std::vector<double> mean_square_statistic(const std::vector<PathRecord>& ensemble, double C) {
    if (ensemble.empty()) throw std::invalid_argument("mean_square_statistic: empty ensemble");
    if (C < 0.0) throw std::invalid_argument("mean_square_statistic: C must be nonnegative");
    const SimulationGrid grid = ensemble.front().grid;
    const int n = ensemble.front().state_dim;
    for (const PathRecord& p : ensemble)
        if (p.grid != grid || p.state_dim != n)
            throw std::invalid_argument("mean_square_statistic: inconsistent ensemble");

    std::vector<double> out(static_cast<std::size_t>(grid.n_steps + 1));
    std::vector<double> buf(ensemble.size());
    for (long k = 0; k <= grid.n_steps; ++k) {
        for (std::size_t p = 0; p < ensemble.size(); ++p) {
            const double* x = ensemble[p].state_ptr(k);
            double sq = 0.0;
            for (int i = 0; i < n; ++i) sq += x[i] * x[i];
            buf[p] = sq;
        }
        const double mean = pairwise_sum(buf) / static_cast<double>(buf.size());
        out[static_cast<std::size_t>(k)] = std::pow(1.0 + grid.time_at(k), C) * mean;
    }
    return out;
}

CountingReport counting_check(const DelayFunction& delay, const SimulationGrid& grid, long k_max) {
    if (k_max < 1) throw std::invalid_argument("counting_check: k_max must be at least 1");
    std::unordered_map<long, long> counts;
    CountingReport report;
    report.bound = integer_part_guarded(1.0 / (1.0 - delay.eta)) + 1;
    for (long j = 0; j <= k_max; ++j) {
        const long a = j - delay_lag(j, grid, delay);
        const long c = ++counts[a];
        if (c > report.max_count) {
            report.max_count = c;
            report.witness = a;
        }
    }
    return report;
}

} // namespace mtem
