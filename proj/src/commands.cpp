#include "mtem/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtem/integrator.hpp"
#include "mtem/io.hpp"
#include "mtem/stability.hpp"

namespace mtem {

namespace {

namespace fs = std::filesystem;

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    os << content;
}

// every command drops the fully resolved config next to its artifacts so a
// run can be reproduced bit for bit from the output directory alone
void write_run_record(const fs::path& dir, const RunConfig& cfg, const char* command) {
    nlohmann::json j;
    j["command"] = command;
    j["master_seed"] = cfg.seed;
    j["config"] = nlohmann::json::parse(serialize_config(cfg));
    write_file(dir / "run.json", j.dump(2) + "\n");
}

double resolve_epsilon(const RunConfig& cfg, const NamedExperiment& e) {
    const CoefficientSet& c = e.problem.coefficients;
    const EpsilonWindow window = epsilon_window(c.lambda1, c.lambda2, e.problem.delay.eta, e.regime);
    return cfg.epsilon.value_or(window.midpoint());
}

struct Certificates {
    RateCertificate cert;
    ExactRateCertificate exact;
};

Certificates compute_certificates(const NamedExperiment& e, double epsilon) {
    const CoefficientSet& c = e.problem.coefficients;
    const double eta = e.problem.delay.eta;
    Certificates out;
    if (e.regime == DelayRegime::bounded) {
        out.cert = solve_c_tilde_bounded(c.lambda1, c.lambda2, eta, e.problem.delay.tau, epsilon, c.lambda0);
        out.exact = solve_gamma0_exact(c.lambda1, c.lambda2, eta, e.problem.delay.tau, c.lambda0);
    } else {
        out.cert = c_tilde_unbounded(c.lambda1, c.lambda2, eta, epsilon, c.lambda0);
        out.exact = exact_rate_unbounded(c.lambda1, c.lambda2, eta, c.lambda0);
    }
    return out;
}

std::string decay_table_csv(const std::vector<PathRecord>& ensemble) {
    std::ostringstream os;
    os << "path_index,k,t,as_statistic,exp_statistic\n";
    for (const PathRecord& p : ensemble) {
        const DecayStatistics stats = decay_statistics(p);
        for (std::size_t i = 0; i < stats.as_statistic.size(); ++i) {
            const long k = stats.valid_from + static_cast<long>(i);
            os << p.path_index << ',' << k << ',' << format_double(static_cast<double>(k) * stats.dt) << ','
               << format_double(stats.as_statistic[i]) << ',' << format_double(stats.exp_statistic[i]) << '\n';
        }
    }
    return os.str();
}

} // namespace

int command_simulate(const RunConfig& cfg, std::ostream& log) {
    const MaterializedRun run = materialize(cfg);
    const NamedExperiment& e = run.experiment;
    const fs::path dir = prepare_out_dir(cfg);
    write_run_record(dir, cfg, "simulate");

    const std::vector<PathRecord> ensemble =
        simulate_ensemble(e.problem, e.policy, e.grid, cfg.seed, cfg.paths);

    const bool want_csv = cfg.format == "csv" || cfg.format == "both";
    const bool want_json = cfg.format == "json" || cfg.format == "both";
    if (want_csv) {
        std::ostringstream os;
        write_ensemble_csv(os, ensemble);
        write_file(dir / "ensemble.csv", os.str());
        write_file(dir / "decay_stats.csv", decay_table_csv(ensemble));
    }
    if (want_json) write_file(dir / "ensemble.json", ensemble_to_json(ensemble).dump(2) + "\n");

    if (!cfg.ms_exponents.empty()) {
        std::ostringstream os;
        os << "k,t";
        std::vector<std::vector<double>> curves;
        for (double C : cfg.ms_exponents) {
            curves.push_back(mean_square_statistic(ensemble, C));
            os << ",ms_C" << format_double(C);
        }
        os << '\n';
        for (long k = 0; k <= e.grid.n_steps; ++k) {
            os << k << ',' << format_double(e.grid.time_at(k));
            for (const std::vector<double>& curve : curves)
                os << ',' << format_double(curve[static_cast<std::size_t>(k)]);
            os << '\n';
        }
        write_file(dir / "ms_statistic.csv", os.str());
    }

    if (!cfg.quiet)
        log << "simulate: " << cfg.paths << " path(s) x " << e.grid.n_steps << " steps of " << e.name
            << " written to " << dir.string() << "\n";
    return 0;
}

int command_certify(const RunConfig& cfg, std::ostream& log) {
    const MaterializedRun run = materialize(cfg);
    const NamedExperiment& e = run.experiment;
    const fs::path dir = prepare_out_dir(cfg);
    write_run_record(dir, cfg, "certify");

    const double epsilon = resolve_epsilon(cfg, e);
    const Certificates certs = compute_certificates(e, epsilon);

    nlohmann::json j;
    j["problem"] = e.name;
    j["epsilon"] = epsilon;
    j["certificate"] = certificate_to_json(certs.cert);
    j["exact_certificate"] = exact_certificate_to_json(certs.exact);
    write_file(dir / "certificates.json", j.dump(2) + "\n");

    if (!cfg.quiet) {
        log << "certify " << e.name << ": epsilon " << format_double(epsilon) << " in ("
            << format_double(certs.cert.window.lo) << ", " << format_double(certs.cert.window.hi) << ")\n";
        log << "  mean-square rate c_tilde = " << format_double(certs.cert.c_tilde)
            << " (c_tilde0 = " << format_double(certs.cert.c_tilde0)
            << ", residual = " << format_double(certs.cert.residual) << ")\n";
        log << "  exact-solution rate gamma_star = " << format_double(certs.exact.gamma_star);
        if (certs.exact.gamma0) log << " (gamma0 = " << format_double(*certs.exact.gamma0) << ")";
        log << "\n";
    }
    return 0;
}

int command_reproduce(const RunConfig& cfg, std::ostream& log) {
    const MaterializedRun run = materialize(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    write_run_record(dir, cfg, "reproduce");

    const ReproductionReport report = run_reproduction(run.experiment, cfg.seed, cfg.seeds);

    write_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
    const std::string text = report_to_text(report);
    write_file(dir / "report.txt", text);

    // plot data per seed for external tooling
    const std::vector<PathRecord> paths =
        simulate_ensemble(run.experiment.problem, run.experiment.policy, run.experiment.grid, cfg.seed, cfg.seeds);
    for (const PathRecord& p : paths) {
        std::ostringstream os;
        write_decay_csv(os, decay_statistics(p));
        write_file(dir / ("decay_seed" + std::to_string(p.path_index) + ".csv"), os.str());
    }

    if (!cfg.quiet) log << text;
    return report.all_passed() ? 0 : 1;
}

int command_check(const RunConfig& cfg, std::ostream& log) {
    const MaterializedRun run = materialize(cfg);
    const NamedExperiment& e = run.experiment;
    const fs::path dir = prepare_out_dir(cfg);
    write_run_record(dir, cfg, "check");

    ValidationReport validation = validate_problem(e.problem);
    for (const Finding& f : run.config_findings) validation.findings.push_back(f);

    const CountingReport counting = counting_check(e.problem.delay, e.grid, 10000);
    const CompatibilityReport compat = check_truncation_compatibility(
        e.problem, e.policy, {10.0, 100.0, 1000.0, 10000.0}, {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0});

    nlohmann::json j;
    j["problem"] = e.name;
    j["validation"] = validation_to_json(validation);
    j["counting"] = counting_to_json(counting);
    j["compatibility"] = compatibility_to_json(compat);
    write_file(dir / "validation.json", j.dump(2) + "\n");

    const bool counting_ok = counting.max_count <= counting.bound;
    const bool passed = validation.all_passed() && counting_ok && compat.decreasing;
    if (!cfg.quiet) {
        for (const Finding& f : validation.findings)
            log << "  [" << (f.passed ? "pass" : (f.warning_only ? "warn" : "FAIL")) << "] " << f.name
                << (f.witness.empty() ? "" : " @ " + f.witness) << "\n";
        log << "  [" << (counting_ok ? "pass" : "FAIL") << "] delayed-index multiplicity " << counting.max_count
            << " <= bound " << counting.bound << "\n";
        log << "  [" << (compat.decreasing ? "pass" : "FAIL") << "] truncation compatibility s(R) decreasing, last "
            << format_double(compat.s_values.back()) << "\n";
        log << (passed ? "check passed" : "check FAILED") << "\n";
    }
    return passed ? 0 : 1;
}

} // namespace mtem
