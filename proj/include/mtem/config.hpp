#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtem/experiments.hpp"
#include "mtem/model.hpp"

namespace mtem {

struct GridSpec {
    std::optional<double> dt;
    std::optional<long> steps;

    bool operator==(const GridSpec&) const = default;
};

struct PolicySpec {
    std::string kind = "power"; // only "power" is expressible in configs
    double exponent = 1.0 / 9.0;
    double delta_star = 1.0;

    bool operator==(const PolicySpec&) const = default;
};

struct DelaySpec {
    std::string kind = "constant"; // constant | exp-approach | pantograph
    double tau = 0.0;              // constant, exp-approach
    double gain = 0.0;             // exp-approach: delta(t) = tau + gain (1 - e^{-t})
    double q = 0.5;                // pantograph: delta(t) = (1-q) t

    bool operator==(const DelaySpec&) const = default;
};

struct LipschitzSpec {
    double scale = 1.0;
    double power = 0.0;
    double offset = 0.0;

    bool operator==(const LipschitzSpec&) const = default;
};

/// Inline problem in the polynomial coefficient family: drift terms are
/// monomials c x^a y^b summed and divided by (1+t); diffusion is the square
/// root of such a sum.
struct InlineSpec {
    std::vector<PolyTerm> drift;
    std::vector<PolyTerm> diffusion_sq;
    double K = 0.0;
    double lambda0 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    LipschitzSpec lipschitz;
    DelaySpec delay;
    double history = 0.0; // constant initial value

    bool operator==(const InlineSpec&) const = default;
};

struct RunConfig {
    std::string schema = "mtem/1";
    std::optional<std::string> example;
    std::optional<InlineSpec> inline_spec;
    GridSpec grid;
    std::optional<PolicySpec> policy;
    long paths = 1;
    long seeds = 10;
    std::uint64_t seed = 42;
    std::optional<double> epsilon; // unset = window midpoint
    std::vector<double> ms_exponents;
    std::string out = "mtem-out";
    std::string format = "both"; // csv | json | both
    bool quiet = false;

    bool operator==(const RunConfig&) const = default;
};

/// Strict JSON parser: unknown keys are errors, constraint violations name
/// the violated invariant, syntax errors carry line and column.
RunConfig parse_config(const std::string& text);

/// Resolved config as JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Problem/policy/grid assembled from the config, with any advisory
/// findings collected during assembly (e.g. a nonpositive stability margin
/// for inline problems, which warns but does not block).
struct MaterializedRun {
    NamedExperiment experiment;
    std::vector<Finding> config_findings;
};

MaterializedRun materialize(const RunConfig& config);

} // namespace mtem
