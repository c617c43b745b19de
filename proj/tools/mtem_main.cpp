#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtem/commands.hpp"
#include "mtem/config.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string example;
    double dt = 0.0;
    long steps = 0;
    long paths = 0;
    long long seed = -1;
    double epsilon = 0.0;
    std::string out;
    std::string format;
    bool quiet = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--example", o.example, "named problem: example1 or example2");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--steps", o.steps, "forward steps");
    cmd->add_option("--paths", o.paths, "ensemble size for simulate");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--epsilon", o.epsilon, "rate-equation epsilon (default: window midpoint)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--format", o.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_flag("--quiet", o.quiet, "suppress progress output");
}

mtem::RunConfig assemble_config(const CliOverrides& o, const CLI::App& cmd) {
    mtem::RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path, std::ios::binary);
        if (!is) throw std::invalid_argument("cannot read config file " + o.config_path);
        std::ostringstream buf;
        buf << is.rdbuf();
        cfg = mtem::parse_config(buf.str());
    }
    if (cmd.count("--example")) cfg.example = o.example;
    if (cmd.count("--dt")) cfg.grid.dt = o.dt;
    if (cmd.count("--steps")) cfg.grid.steps = o.steps;
    if (cmd.count("--paths")) cfg.paths = o.paths;
    if (cmd.count("--seed")) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (cmd.count("--epsilon")) cfg.epsilon = o.epsilon;
    if (cmd.count("--out")) cfg.out = o.out;
    if (cmd.count("--format")) cfg.format = o.format;
    if (cmd.count("--quiet")) cfg.quiet = true;
    if (!cfg.example && !cfg.inline_spec)
        throw std::invalid_argument("no problem selected: pass --example or a --config with an inline spec");
    mtem::materialize(cfg); // validate the assembled configuration before running
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MTEM: truncated Euler-Maruyama simulation and polynomial-stability analysis for delay SDEs"};
    app.require_subcommand(1);

    CliOverrides o;
    CLI::App* sim = app.add_subcommand("simulate", "simulate an ensemble and write paths plus decay statistics");
    CLI::App* cert = app.add_subcommand("certify", "compute theoretical decay-rate certificates");
    CLI::App* repro = app.add_subcommand("reproduce", "run a named experiment against its expected checks");
    CLI::App* check = app.add_subcommand("check", "validate problem assumptions and structural bounds");
    for (CLI::App* cmd : {sim, cert, repro, check}) add_common_options(cmd, o);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* active = app.get_subcommands().front();
    try {
        const mtem::RunConfig cfg = assemble_config(o, *active);
        if (active == sim) return mtem::command_simulate(cfg, std::cout);
        if (active == cert) return mtem::command_certify(cfg, std::cout);
        if (active == repro) return mtem::command_reproduce(cfg, std::cout);
        return mtem::command_check(cfg, std::cout);
    } catch (const std::exception& e) {
        const nlohmann::json record = {{"error", {{"type", "run_failure"}, {"message", e.what()}}}};
        std::cerr << record.dump() << "\n";
        return 2;
    }
}
