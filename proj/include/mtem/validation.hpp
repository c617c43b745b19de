#pragma once

#include <string>
#include <vector>

#include "mtem/model.hpp"
#include "mtem/truncation.hpp"

namespace mtem {

struct Finding {
    std::string name;
    bool passed = true;
    bool warning_only = false; // advisory findings never fail a run
    double worst = 0.0;        // worst residual / violation magnitude
    std::string witness;       // point where the worst value occurred
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool all_passed() const {
        for (const Finding& f : findings)
            if (!f.passed && !f.warning_only) return false;
        return true;
    }
};

/// Samples every declared invariant of the problem: delay slope vs eta,
/// delay range, trivial solution at the origin, envelope monotonicity,
/// history finiteness and the dissipativity condition on the default box.
/// Violations become failed findings, never exceptions.
ValidationReport validate_problem(const SddeProblem& problem, double t_max = 10.0, int samples = 200);

struct StatePoint {
    Vec x;
    Vec y;
    double t = 0.0;
};

/// Worst residual of
///   2<x,f> + |g|_F^2 - ( K(1+t)^{-lambda0} - lambda1|x|^2 + lambda2|y|^2 )/(1+t)
/// over the given points. The condition holds iff the result <= tolerance.
double check_khasminskii(const SddeProblem& problem, const std::vector<StatePoint>& points);

/// lambda1 - lambda2 * (floor((1-eta)^-1) + 1). Positive margin is the gate
/// for every rate certificate below.
double stability_margin(const SddeProblem& problem);

struct CompatibilityReport {
    std::vector<double> r_values;
    std::vector<double> s_values;
    bool decreasing = false; // last < first and last < 1e-2
};

/// s(R) = max over t_grid of (1+t) * L(R,t)^2 * h_inverse(R). The scheme is
/// compatible with the policy when s decays toward zero as R grows.
CompatibilityReport check_truncation_compatibility(const SddeProblem& problem, const TruncationPolicy& policy,
                                                   const std::vector<double>& r_values,
                                                   const std::vector<double>& t_grid);

} // namespace mtem
