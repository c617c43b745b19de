#include "mtem/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtem/validation.hpp"

namespace mtem {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("parse_config: " + what); }

void expect_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const std::string& a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) fail("unknown key '" + key + "' in " + where);
    }
}

double get_double(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key + " must be a number");
    return v.get<double>();
}

double get_double_or(const json& obj, const char* key, const std::string& where, double fallback) {
    return obj.contains(key) ? get_double(obj, key, where) : fallback;
}

long get_long(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
    return v.get<long>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<PolyTerm> parse_terms(const json& arr, const std::string& where) {
    if (!arr.is_array()) fail(where + " must be an array of [c, xpow, ypow] triples");
    std::vector<PolyTerm> terms;
    for (const json& item : arr) {
        if (!item.is_array() || item.size() != 3 || !item[0].is_number() || !item[1].is_number_integer() ||
            !item[2].is_number_integer())
            fail(where + " entries must be [c, xpow, ypow] with integer powers");
        PolyTerm t{item[0].get<double>(), item[1].get<int>(), item[2].get<int>()};
        if (t.xpow < 0 || t.ypow < 0) fail(where + " powers must be nonnegative");
        terms.push_back(t);
    }
    return terms;
}

DelaySpec parse_delay(const json& obj) {
    if (!obj.is_object()) fail("inline.delay must be an object");
    DelaySpec d;
    d.kind = get_string(obj, "kind", "inline.delay");
    if (d.kind == "constant") {
        expect_keys(obj, {"kind", "tau"}, "inline.delay");
        d.tau = get_double(obj, "tau", "inline.delay");
        if (d.tau < 0.0) fail("inline.delay.tau must be nonnegative");
    } else if (d.kind == "exp-approach") {
        expect_keys(obj, {"kind", "tau", "gain"}, "inline.delay");
        d.tau = get_double(obj, "tau", "inline.delay");
        d.gain = get_double(obj, "gain", "inline.delay");
        if (d.tau < 0.0) fail("inline.delay.tau must be nonnegative");
        if (d.gain < 0.0 || d.gain >= 1.0) fail("inline.delay.gain must lie in [0,1)");
    } else if (d.kind == "pantograph") {
        expect_keys(obj, {"kind", "q"}, "inline.delay");
        d.q = get_double(obj, "q", "inline.delay");
        if (d.q <= 0.0 || d.q > 1.0) fail("inline.delay.q must lie in (0,1]");
    } else {
        fail("inline.delay.kind must be one of constant, exp-approach, pantograph");
    }
    return d;
}

InlineSpec parse_inline(const json& obj) {
    if (!obj.is_object()) fail("inline must be an object");
    expect_keys(obj,
                {"drift", "diffusion_sq", "K", "lambda0", "lambda1", "lambda2", "lipschitz", "delay", "history"},
                "inline");
    InlineSpec spec;
    if (!obj.contains("drift") || !obj.contains("diffusion_sq"))
        fail("inline requires drift and diffusion_sq term lists");
    spec.drift = parse_terms(obj.at("drift"), "inline.drift");
    spec.diffusion_sq = parse_terms(obj.at("diffusion_sq"), "inline.diffusion_sq");
    spec.K = get_double_or(obj, "K", "inline", 0.0);
    spec.lambda0 = get_double_or(obj, "lambda0", "inline", 1.0);
    spec.lambda1 = get_double_or(obj, "lambda1", "inline", 1.0);
    spec.lambda2 = get_double_or(obj, "lambda2", "inline", 0.0);
    if (spec.K < 0.0) fail("inline.K must be nonnegative");
    if (spec.lambda0 <= 0.0) fail("inline.lambda0 must be positive");
    if (spec.lambda1 <= 0.0) fail("inline.lambda1 must be positive");
    if (spec.lambda2 < 0.0) fail("inline.lambda2 must be nonnegative");
    if (obj.contains("lipschitz")) {
        const json& lip = obj.at("lipschitz");
        if (!lip.is_object()) fail("inline.lipschitz must be an object");
        expect_keys(lip, {"scale", "power", "offset"}, "inline.lipschitz");
        spec.lipschitz.scale = get_double_or(lip, "scale", "inline.lipschitz", 1.0);
        spec.lipschitz.power = get_double_or(lip, "power", "inline.lipschitz", 0.0);
        spec.lipschitz.offset = get_double_or(lip, "offset", "inline.lipschitz", 0.0);
        if (spec.lipschitz.scale <= 0.0) fail("inline.lipschitz.scale must be positive");
    }
    if (!obj.contains("delay")) fail("inline requires a delay spec");
    spec.delay = parse_delay(obj.at("delay"));
    spec.history = get_double_or(obj, "history", "inline", 0.0);
    return spec;
}

std::pair<long, long> line_and_column(const std::string& text, std::size_t byte) {
    long line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream msg;
        msg << "syntax error at line " << line << ", column " << col;
        fail(msg.str());
    }
    if (!j.is_object()) fail("top level must be a JSON object");
    expect_keys(j,
                {"schema", "example", "inline", "grid", "policy", "paths", "seeds", "seed", "epsilon",
                 "ms_exponents", "out", "format", "quiet"},
                "config");

    RunConfig cfg;
    if (j.contains("schema")) {
        cfg.schema = get_string(j, "schema", "config");
        if (cfg.schema != "mtem/1") fail("schema must be \"mtem/1\"");
    }
    if (j.contains("example")) {
        cfg.example = get_string(j, "example", "config");
        if (*cfg.example != "example1" && *cfg.example != "example2")
            fail("example must be example1 or example2");
    }
    if (j.contains("inline")) cfg.inline_spec = parse_inline(j.at("inline"));
    if (cfg.example.has_value() == cfg.inline_spec.has_value())
        fail("exactly one of 'example' and 'inline' must be present");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object()) fail("grid must be an object");
        expect_keys(g, {"dt", "steps"}, "grid");
        if (g.contains("dt")) {
            cfg.grid.dt = get_double(g, "dt", "grid");
            if (!(*cfg.grid.dt > 0.0)) fail("grid.dt must be positive");
        }
        if (g.contains("steps")) {
            cfg.grid.steps = get_long(g, "steps", "grid");
            if (*cfg.grid.steps < 1) fail("grid.steps must be at least 1");
        }
    }
    if (j.contains("policy")) {
        const json& p = j.at("policy");
        if (!p.is_object()) fail("policy must be an object");
        expect_keys(p, {"kind", "exponent", "delta_star"}, "policy");
        PolicySpec spec;
        if (p.contains("kind")) spec.kind = get_string(p, "kind", "policy");
        if (spec.kind != "power") fail("policy.kind must be \"power\" (custom policies need the library API)");
        spec.exponent = get_double_or(p, "exponent", "policy", spec.exponent);
        spec.delta_star = get_double_or(p, "delta_star", "policy", spec.delta_star);
        if (spec.exponent <= 0.0) fail("policy.exponent must be positive");
        if (spec.delta_star <= 0.0) fail("policy.delta_star must be positive");
        cfg.policy = spec;
    }
    if (j.contains("paths")) {
        cfg.paths = get_long(j, "paths", "config");
        if (cfg.paths < 1) fail("paths must be at least 1");
    }
    if (j.contains("seeds")) {
        cfg.seeds = get_long(j, "seeds", "config");
        if (cfg.seeds < 1) fail("seeds must be at least 1");
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer()) fail("seed must be an integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        if (e.is_string()) {
            if (e.get<std::string>() != "midpoint") fail("epsilon must be a number or \"midpoint\"");
        } else if (e.is_number()) {
            cfg.epsilon = e.get<double>();
            if (!(*cfg.epsilon > 0.0)) fail("epsilon must be positive");
        } else {
            fail("epsilon must be a number or \"midpoint\"");
        }
    }
    if (j.contains("ms_exponents")) {
        const json& arr = j.at("ms_exponents");
        if (!arr.is_array()) fail("ms_exponents must be an array of numbers");
        for (const json& v : arr) {
            if (!v.is_number()) fail("ms_exponents must be an array of numbers");
            const double c = v.get<double>();
            if (c < 0.0) fail("ms_exponents entries must be nonnegative");
            cfg.ms_exponents.push_back(c);
        }
    }
    if (j.contains("out")) {
        cfg.out = get_string(j, "out", "config");
        if (cfg.out.empty()) fail("out must be a nonempty path");
    }
    if (j.contains("format")) {
        cfg.format = get_string(j, "format", "config");
        if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
            fail("format must be csv, json or both");
    }
    if (j.contains("quiet")) {
        const json& q = j.at("quiet");
        if (!q.is_boolean()) fail("quiet must be a boolean");
        cfg.quiet = q.get<bool>();
    }

    materialize(cfg); // surfaces grid admissibility and other assembly errors at parse time
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["schema"] = cfg.schema;
    if (cfg.example) j["example"] = *cfg.example;
    if (cfg.inline_spec) {
        const InlineSpec& s = *cfg.inline_spec;
        json terms_d = json::array(), terms_g = json::array();
        for (const PolyTerm& t : s.drift) terms_d.push_back({t.c, t.xpow, t.ypow});
        for (const PolyTerm& t : s.diffusion_sq) terms_g.push_back({t.c, t.xpow, t.ypow});
        json delay = {{"kind", s.delay.kind}};
        if (s.delay.kind == "constant") delay["tau"] = s.delay.tau;
        if (s.delay.kind == "exp-approach") {
            delay["tau"] = s.delay.tau;
            delay["gain"] = s.delay.gain;
        }
        if (s.delay.kind == "pantograph") delay["q"] = s.delay.q;
        j["inline"] = {{"drift", std::move(terms_d)},
                       {"diffusion_sq", std::move(terms_g)},
                       {"K", s.K},
                       {"lambda0", s.lambda0},
                       {"lambda1", s.lambda1},
                       {"lambda2", s.lambda2},
                       {"lipschitz",
                        {{"scale", s.lipschitz.scale}, {"power", s.lipschitz.power}, {"offset", s.lipschitz.offset}}},
                       {"delay", std::move(delay)},
                       {"history", s.history}};
    }
    json grid = json::object();
    if (cfg.grid.dt) grid["dt"] = *cfg.grid.dt;
    if (cfg.grid.steps) grid["steps"] = *cfg.grid.steps;
    if (!grid.empty()) j["grid"] = std::move(grid);
    if (cfg.policy)
        j["policy"] = {{"kind", cfg.policy->kind},
                       {"exponent", cfg.policy->exponent},
                       {"delta_star", cfg.policy->delta_star}};
    j["paths"] = cfg.paths;
    j["seeds"] = cfg.seeds;
    j["seed"] = cfg.seed;
    if (cfg.epsilon)
        j["epsilon"] = *cfg.epsilon;
    else
        j["epsilon"] = "midpoint";
    if (!cfg.ms_exponents.empty()) j["ms_exponents"] = cfg.ms_exponents;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    j["quiet"] = cfg.quiet;
    return j.dump(2) + "\n";
}

MaterializedRun materialize(const RunConfig& cfg) {
    MaterializedRun run;
    if (cfg.example) {
        run.experiment = build_example(*cfg.example);
        if (cfg.policy) run.experiment.policy = power_policy(cfg.policy->exponent, cfg.policy->delta_star);
        if (cfg.grid.dt || cfg.grid.steps) {
            const double dt = cfg.grid.dt.value_or(run.experiment.grid.dt);
            const long steps = cfg.grid.steps.value_or(run.experiment.grid.n_steps);
            run.experiment.grid = make_grid(dt, run.experiment.problem.delay.tau, steps);
        }
        return run;
    }

    const InlineSpec& s = *cfg.inline_spec;
    NamedExperiment e;
    e.name = "inline";
    e.problem.coefficients =
        polynomial_coefficients(s.drift, s.diffusion_sq, s.K, s.lambda0, s.lambda1, s.lambda2,
                                LipschitzEnvelope{s.lipschitz.scale, s.lipschitz.power, s.lipschitz.offset});
    if (s.delay.kind == "constant")
        e.problem.delay = constant_delay(s.delay.tau);
    else if (s.delay.kind == "exp-approach")
        e.problem.delay = exp_approach_delay(s.delay.tau, s.delay.gain);
    else
        e.problem.delay = pantograph_delay(s.delay.q);
    e.problem.history = constant_history(s.history, e.problem.delay.tau);
    e.regime = e.problem.delay.is_bounded ? DelayRegime::bounded : DelayRegime::unbounded;
    const PolicySpec policy = cfg.policy.value_or(PolicySpec{});
    e.policy = power_policy(policy.exponent, policy.delta_star);
    if (!cfg.grid.dt) fail("grid.dt is required for inline problems");
    if (!cfg.grid.steps) fail("grid.steps is required for inline problems");
    e.grid = make_grid(*cfg.grid.dt, e.problem.delay.tau, *cfg.grid.steps);

    const double margin = stability_margin(e.problem);
    if (!(margin > 0.0)) {
        Finding f{"stability margin non-positive", false, true, margin, ""};
        run.config_findings.push_back(f);
    }
    run.experiment = std::move(e);
    return run;
}

} // namespace mtem
