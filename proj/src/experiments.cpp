#include "mtem/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mtem/integrator.hpp"

namespace mtem {

namespace {

CoefficientSet example_coefficients() {
    // f(x,y,t) = (-2x + y/2 - x^3 - x y^4)/(1+t)
    // g(x,y,t) = sqrt((2x^2 y^4 + y^2/2 + 2x^4)/(1+t))
    const std::vector<PolyTerm> drift = {{-2.0, 1, 0}, {0.5, 0, 1}, {-1.0, 3, 0}, {-1.0, 1, 4}};
    const std::vector<PolyTerm> diffusion_sq = {{2.0, 2, 4}, {0.5, 0, 2}, {2.0, 4, 0}};
    // K = 0 makes lambda0 inert; 2 keeps the (1+t)^{-lambda0} term decaying
    return polynomial_coefficients(drift, diffusion_sq, 0.0, 2.0, 3.5, 1.0,
                                   LipschitzEnvelope{5.0, 4.0, 2.0});
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

NamedExperiment build_example(const std::string& name) {
    NamedExperiment e;
    e.name = name;
    e.policy = power_policy(1.0 / 9.0);
    if (name == "example1") {
        e.problem.coefficients = example_coefficients();
        e.problem.delay = exp_approach_delay(1.0, 0.5);
        e.problem.history = constant_history(2.0, 1.0);
        e.grid = make_grid(0.1, 1.0, 5000);
        e.regime = DelayRegime::bounded;
        e.expected = {
            {"median final as-statistic", CheckKind::median_as_below, -1.0, 0.0},
            {"seed fraction with as-statistic <= -0.5", CheckKind::fraction_as_below, -0.5, 0.8},
            {"max |final exp-statistic|", CheckKind::max_abs_exp_below, 0.05, 0.0},
        };
    } else if (name == "example2") {
        e.problem.coefficients = example_coefficients();
        e.problem.delay = pantograph_delay(0.5);
        e.problem.history = constant_history(3.0, 0.0);
        e.grid = make_grid(0.05, 0.0, 1000);
        e.regime = DelayRegime::unbounded;
        e.expected = {
            {"median final as-statistic", CheckKind::median_as_below, -1.0, 0.0},
        };
    } else {
        throw std::invalid_argument("build_example: unknown name '" + name + "'");
    }
    return e;
}

ReproductionReport run_reproduction(const NamedExperiment& experiment, std::uint64_t master_seed, long n_seeds) {
    if (n_seeds < 1) throw std::invalid_argument("run_reproduction: n_seeds must be at least 1");
    const auto started = std::chrono::steady_clock::now();

    ReproductionReport report;
    report.experiment = experiment.name;
    report.master_seed = master_seed;
    report.n_seeds = n_seeds;

    const std::vector<PathRecord> paths =
        simulate_ensemble(experiment.problem, experiment.policy, experiment.grid, master_seed, n_seeds);
    for (const PathRecord& p : paths) {
        const DecayStatistics stats = decay_statistics(p);
        report.final_as.push_back(stats.as_statistic.back());
        report.final_exp.push_back(stats.exp_statistic.back());
        report.tail_as.push_back(tail_max(stats.as_statistic));
    }

    for (const ExpectedCheck& check : experiment.expected) {
        CheckVerdict v;
        v.name = check.name;
        v.threshold = check.threshold;
        switch (check.kind) {
        case CheckKind::median_as_below:
            v.measured = median(report.final_as);
            v.passed = v.measured <= check.threshold;
            break;
        case CheckKind::fraction_as_below: {
            long hit = 0;
            for (double a : report.final_as)
                if (a <= check.threshold) ++hit;
            v.measured = static_cast<double>(hit) / static_cast<double>(n_seeds);
            v.passed = v.measured >= check.min_fraction;
            break;
        }
        case CheckKind::max_abs_exp_below: {
            double worst = 0.0;
            for (double eps : report.final_exp) worst = std::max(worst, std::abs(eps));
            v.measured = worst;
            v.passed = worst <= check.threshold;
            break;
        }
        }
        report.verdicts.push_back(v);
    }

    const CoefficientSet& c = experiment.problem.coefficients;
    const double eta = experiment.problem.delay.eta;
    report.window = epsilon_window(c.lambda1, c.lambda2, eta, experiment.regime);
    report.epsilon = report.window.midpoint();
    if (experiment.regime == DelayRegime::bounded) {
        report.certificate =
            solve_c_tilde_bounded(c.lambda1, c.lambda2, eta, experiment.problem.delay.tau, report.epsilon, c.lambda0);
        report.exact = solve_gamma0_exact(c.lambda1, c.lambda2, eta, experiment.problem.delay.tau, c.lambda0);
    } else {
        report.certificate = c_tilde_unbounded(c.lambda1, c.lambda2, eta, report.epsilon, c.lambda0);
        report.exact = exact_rate_unbounded(c.lambda1, c.lambda2, eta, c.lambda0);
    }

    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace mtem
