#include "mtem/validation.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mtem/numeric.hpp"

namespace mtem {

namespace {

std::string point_witness(double x, double y, double t) {
    std::ostringstream os;
    os << "(x,y,t)=(" << x << "," << y << "," << t << ")";
    return os.str();
}

std::string time_witness(double t) {
    std::ostringstream os;
    os << "t=" << t;
    return os.str();
}

std::vector<double> time_grid(double t_max) {
    std::vector<double> ts;
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0})
        if (t <= t_max) ts.push_back(t);
    if (ts.empty() || ts.back() < t_max) ts.push_back(t_max);
    return ts;
}

// representative state vectors for an axis value u: first basis direction
// and the diagonal, enough to exercise scalar and genuinely vector problems
std::vector<Vec> state_samples(int n, double u) {
    Vec e1(static_cast<std::size_t>(n), 0.0);
    e1[0] = u;
    if (n == 1) return {e1};
    Vec diag(static_cast<std::size_t>(n), u / std::sqrt(static_cast<double>(n)));
    return {e1, diag};
}

double khasminskii_residual(const CoefficientSet& c, const Vec& x, const Vec& y, double t) {
    const Vec f = c.drift(x, y, t);
    const Mat g = c.diffusion(x, y, t);
    if (!all_finite(f) || !all_finite(g.a)) return std::numeric_limits<double>::quiet_NaN();
    double gsq = 0.0;
    for (double v : g.a) gsq += v * v;
    const double nx = norm(x), ny = norm(y);
    const double bound = (c.K * std::pow(1.0 + t, -c.lambda0) - c.lambda1 * nx * nx + c.lambda2 * ny * ny) / (1.0 + t);
    return 2.0 * dot(x, f) + gsq - bound;
}

} // namespace

ValidationReport validate_problem(const SddeProblem& problem, double t_max, int samples) {
    if (samples < 1) throw std::invalid_argument("validate_problem: samples must be at least 1");
    if (!(t_max > 0.0)) throw std::invalid_argument("validate_problem: t_max must be positive");

    ValidationReport report;
    const DelayFunction& delay = problem.delay;
    const CoefficientSet& coeff = problem.coefficients;
    const std::vector<double> ts = time_grid(t_max);

    {
        Finding f{"delay value at zero", true, false, 0.0, "t=0"};
        f.worst = std::abs(delay(0.0) - delay.tau);
        f.passed = f.worst <= 1e-12;
        report.findings.push_back(f);
    }
    {
        Finding slope{"delay slope exceeds eta", true};
        Finding nonneg{"delay nonnegative", true};
        Finding bounded{"delay within bound", true};
        const double fd_step = 1e-5;
        const double denom = samples > 1 ? static_cast<double>(samples - 1) : 1.0;
        for (int i = 0; i < samples; ++i) {
            const double t = t_max * static_cast<double>(i) / denom;
            const double d = delay(t);
            const double excess = (delay(t + fd_step) - d) / fd_step - delay.eta;
            if (excess > slope.worst) {
                slope.worst = excess;
                slope.witness = time_witness(t);
            }
            if (-d > nonneg.worst) {
                nonneg.worst = -d;
                nonneg.witness = time_witness(t);
            }
            if (delay.is_bounded && delay.bound) {
                const double over = d - *delay.bound;
                if (over > bounded.worst) {
                    bounded.worst = over;
                    bounded.witness = time_witness(t);
                }
            }
        }
        slope.passed = slope.worst <= 1e-8;
        nonneg.passed = nonneg.worst <= 0.0;
        bounded.passed = bounded.worst <= 1e-12;
        report.findings.push_back(slope);
        report.findings.push_back(nonneg);
        if (delay.is_bounded && delay.bound) report.findings.push_back(bounded);
    }
    {
        Finding f{"trivial solution", true};
        const Vec zero(static_cast<std::size_t>(coeff.state_dim), 0.0);
        for (double t : ts) {
            const double v = std::max(norm(coeff.drift(zero, zero, t)), frobenius_norm(coeff.diffusion(zero, zero, t)));
            if (v > f.worst) {
                f.worst = v;
                f.witness = time_witness(t);
            }
        }
        f.passed = f.worst == 0.0;
        report.findings.push_back(f);
    }
    {
        Finding f{"lipschitz envelope nondecreasing", true};
        const double radii[] = {0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
        for (double t : ts)
            for (std::size_t i = 0; i + 1 < std::size(radii); ++i) {
                const double drop = coeff.lipschitz(radii[i], t) - coeff.lipschitz(radii[i + 1], t);
                if (drop > f.worst) {
                    f.worst = drop;
                    f.witness = time_witness(t);
                }
            }
        f.passed = f.worst <= 0.0;
        report.findings.push_back(f);
    }
    {
        Finding finite{"non-finite coefficient", true};
        Finding khas{"khasminskii condition", true};
        khas.worst = -std::numeric_limits<double>::infinity();
        for (double t : ts)
            for (int ix = 0; ix <= 40; ++ix)
                for (int iy = 0; iy <= 40; ++iy) {
                    const double ux = -5.0 + 0.25 * ix;
                    const double uy = -5.0 + 0.25 * iy;
                    for (const Vec& x : state_samples(coeff.state_dim, ux))
                        for (const Vec& y : state_samples(coeff.state_dim, uy)) {
                            const double r = khasminskii_residual(coeff, x, y, t);
                            if (std::isnan(r)) {
                                finite.passed = false;
                                finite.worst += 1.0;
                                finite.witness = point_witness(ux, uy, t);
                            } else if (r > khas.worst) {
                                khas.worst = r;
                                khas.witness = point_witness(ux, uy, t);
                            }
                        }
                }
        khas.passed = khas.worst <= 1e-9;
        report.findings.push_back(finite);
        report.findings.push_back(khas);
    }
    {
        Finding f{"history finite", true};
        const double tau = problem.history.tau;
        for (int i = 0; i <= 40; ++i) {
            const double theta = tau == 0.0 ? 0.0 : -tau + tau * static_cast<double>(i) / 40.0;
            const Vec v = problem.history.xi(theta);
            if (static_cast<int>(v.size()) != coeff.state_dim || !all_finite(v)) {
                f.passed = false;
                f.witness = time_witness(theta);
                break;
            }
            f.worst = std::max(f.worst, norm(v));
        }
        report.findings.push_back(f);
    }
    {
        Finding f{"history tau consistent", true};
        f.worst = std::abs(problem.history.tau - delay.tau);
        f.passed = f.worst <= 1e-12;
        report.findings.push_back(f);
    }
    {
        Finding f{"stability margin positive", true, true};
        f.worst = stability_margin(problem);
        f.passed = f.worst > 0.0;
        report.findings.push_back(f);
    }
    return report;
}

double check_khasminskii(const SddeProblem& problem, const std::vector<StatePoint>& points) {
    if (points.empty()) throw std::invalid_argument("check_khasminskii: points must be nonempty");
    double worst = -std::numeric_limits<double>::infinity();
    for (const StatePoint& p : points) {
        if (p.t < 0.0) throw std::invalid_argument("check_khasminskii: negative time");
        const double r = khasminskii_residual(problem.coefficients, p.x, p.y, p.t);
        if (std::isnan(r)) throw std::runtime_error("check_khasminskii: coefficient overflow at point");
        worst = std::max(worst, r);
    }
    return worst;
}

double stability_margin(const SddeProblem& problem) {
    const double eta = problem.delay.eta;
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("stability_margin: eta must lie in [0,1)");
    const long m0 = integer_part_guarded(1.0 / (1.0 - eta));
    return problem.coefficients.lambda1 - problem.coefficients.lambda2 * static_cast<double>(m0 + 1);
}

CompatibilityReport check_truncation_compatibility(const SddeProblem& problem, const TruncationPolicy& policy,
                                                   const std::vector<double>& r_values,
                                                   const std::vector<double>& t_grid) {
    if (!policy.h_inverse)
        throw std::invalid_argument("check_truncation_compatibility: policy inverse unavailable");
    if (r_values.empty()) throw std::invalid_argument("check_truncation_compatibility: r_values must be nonempty");
    for (std::size_t i = 0; i + 1 < r_values.size(); ++i)
        if (!(r_values[i] < r_values[i + 1]))
            throw std::invalid_argument("check_truncation_compatibility: r_values must be strictly increasing");
    if (t_grid.empty()) throw std::invalid_argument("check_truncation_compatibility: t_grid must be nonempty");

    CompatibilityReport report;
    report.r_values = r_values;
    for (double R : r_values) {
        const double hinv = policy.h_inverse(R);
        double s = 0.0;
        for (double t : t_grid) {
            const double L = problem.coefficients.lipschitz(R, t);
            s = std::max(s, (1.0 + t) * L * L * hinv);
        }
        report.s_values.push_back(s);
    }
    report.decreasing = report.s_values.back() < report.s_values.front() && report.s_values.back() < 1e-2;
    return report;
}

} // namespace mtem
