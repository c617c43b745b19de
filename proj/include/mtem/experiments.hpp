#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtem/grid.hpp"
#include "mtem/model.hpp"
#include "mtem/stability.hpp"
#include "mtem/truncation.hpp"
#include "mtem/validation.hpp"

namespace mtem {

enum class CheckKind {
    median_as_below,   // median over seeds of the final as-statistic <= threshold
    fraction_as_below, // at least min_fraction of seeds have final as-statistic <= threshold
    max_abs_exp_below, // every seed's |final exp-statistic| <= threshold
};

struct ExpectedCheck {
    std::string name;
    CheckKind kind = CheckKind::median_as_below;
    double threshold = 0.0;
    double min_fraction = 0.0; // only for fraction_as_below
};

/// A named, parameter-locked benchmark problem.
struct NamedExperiment {
    std::string name;
    SddeProblem problem;
    TruncationPolicy policy;
    SimulationGrid grid;
    DelayRegime regime = DelayRegime::bounded;
    std::vector<ExpectedCheck> expected;
};

/// name is "example1" (bounded delay, cubic/quartic scalar SDDE) or
/// "example2" (stochastic pantograph equation, unbounded delay).
NamedExperiment build_example(const std::string& name);

struct CheckVerdict {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct ReproductionReport {
    std::string experiment;
    std::uint64_t master_seed = 0;
    long n_seeds = 0;
    std::vector<double> final_as;  // per-seed as-statistic at the last step
    std::vector<double> final_exp; // per-seed exp-statistic at the last step
    std::vector<double> tail_as;   // per-seed tail-max proxy for the limsup
    std::vector<CheckVerdict> verdicts;
    RateCertificate certificate;
    ExactRateCertificate exact;
    double epsilon = 0.0;
    EpsilonWindow window;
    double runtime_seconds = 0.0;

    bool all_passed() const {
        for (const CheckVerdict& v : verdicts)
            if (!v.passed) return false;
        return true;
    }
};

/// Runs n_seeds independent paths (path_index = 0..n_seeds-1), evaluates the
/// decay statistics at the final step and fills one verdict per expected
/// check, alongside the rate certificates at the window-midpoint epsilon.
ReproductionReport run_reproduction(const NamedExperiment& experiment, std::uint64_t master_seed, long n_seeds);

} // namespace mtem
