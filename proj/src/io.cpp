#include "mtem/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace mtem {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

// JSON has no infinity literal; keep the marker readable instead of null
nlohmann::json json_num(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

void write_state_row(std::ostream& os, const PathRecord& path, long k) {
    os << k << ',' << format_double(path.grid.time_at(k));
    const double* x = path.state_ptr(k);
    for (int i = 0; i < path.state_dim; ++i) os << ',' << format_double(x[i]);
    os << '\n';
}

void write_state_header(std::ostream& os, int state_dim) {
    os << "k,t";
    for (int i = 1; i <= state_dim; ++i) os << ",x_" << i;
    os << '\n';
}

nlohmann::json grid_to_json(const SimulationGrid& grid) {
    return {{"dt", grid.dt}, {"m", grid.m}, {"n_steps", grid.n_steps}, {"tau", grid.tau()}};
}

} // namespace

void write_path_csv(std::ostream& os, const PathRecord& path) {
    write_state_header(os, path.state_dim);
    for (long k = -path.grid.m; k <= path.grid.n_steps; ++k) write_state_row(os, path, k);
}

void write_ensemble_csv(std::ostream& os, const std::vector<PathRecord>& ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("write_ensemble_csv: empty ensemble");
    os << "path_index,";
    write_state_header(os, ensemble.front().state_dim);
    for (const PathRecord& path : ensemble)
        for (long k = -path.grid.m; k <= path.grid.n_steps; ++k) {
            os << path.path_index << ',';
            write_state_row(os, path, k);
        }
}

void write_decay_csv(std::ostream& os, const DecayStatistics& stats) {
    os << "k,t,as_statistic,exp_statistic\n";
    for (std::size_t i = 0; i < stats.as_statistic.size(); ++i) {
        const long k = stats.valid_from + static_cast<long>(i);
        os << k << ',' << format_double(static_cast<double>(k) * stats.dt) << ','
           << format_double(stats.as_statistic[i]) << ',' << format_double(stats.exp_statistic[i]) << '\n';
    }
}

nlohmann::json path_to_json(const PathRecord& path) {
    nlohmann::json states = nlohmann::json::array();
    for (long k = -path.grid.m; k <= path.grid.n_steps; ++k) {
        const double* x = path.state_ptr(k);
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < path.state_dim; ++i) row.push_back(json_num(x[i]));
        states.push_back(std::move(row));
    }
    return {{"grid", grid_to_json(path.grid)},
            {"state_dim", path.state_dim},
            {"master_seed", path.master_seed},
            {"path_index", path.path_index},
            {"truncation_level", path.truncation_level},
            {"first_k", -path.grid.m},
            {"states", std::move(states)}};
}

nlohmann::json ensemble_to_json(const std::vector<PathRecord>& ensemble) {
    nlohmann::json paths = nlohmann::json::array();
    for (const PathRecord& p : ensemble) paths.push_back(path_to_json(p));
    return {{"n_paths", ensemble.size()}, {"paths", std::move(paths)}};
}

namespace {

const char* regime_name(DelayRegime regime) {
    return regime == DelayRegime::bounded ? "bounded" : "unbounded";
}

} // namespace

nlohmann::json certificate_to_json(const RateCertificate& cert) {
    return {{"regime", regime_name(cert.regime)},
            {"epsilon", cert.epsilon},
            {"c_tilde0", cert.c_tilde0},
            {"c_tilde", cert.c_tilde},
            {"residual", cert.residual},
            {"window", {cert.window.lo, cert.window.hi}}};
}

nlohmann::json exact_certificate_to_json(const ExactRateCertificate& cert) {
    nlohmann::json j = {{"regime", regime_name(cert.regime)},
                        {"gamma_star", cert.gamma_star},
                        {"residual", cert.residual}};
    j["gamma0"] = cert.gamma0 ? nlohmann::json(*cert.gamma0) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json validation_to_json(const ValidationReport& report) {
    nlohmann::json findings = nlohmann::json::array();
    for (const Finding& f : report.findings)
        findings.push_back({{"name", f.name},
                            {"passed", f.passed},
                            {"warning_only", f.warning_only},
                            {"worst", json_num(f.worst)},
                            {"witness", f.witness}});
    return {{"all_passed", report.all_passed()}, {"findings", std::move(findings)}};
}

nlohmann::json compatibility_to_json(const CompatibilityReport& report) {
    return {{"r_values", report.r_values}, {"s_values", report.s_values}, {"decreasing", report.decreasing}};
}

nlohmann::json counting_to_json(const CountingReport& report) {
    return {{"max_count", report.max_count},
            {"bound", report.bound},
            {"witness", report.witness},
            {"within_bound", report.max_count <= report.bound}};
}

nlohmann::json report_to_json(const ReproductionReport& report) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const CheckVerdict& v : report.verdicts)
        verdicts.push_back(
            {{"name", v.name}, {"passed", v.passed}, {"measured", json_num(v.measured)}, {"threshold", v.threshold}});
    nlohmann::json final_as = nlohmann::json::array(), final_exp = nlohmann::json::array(),
                   tail_as = nlohmann::json::array();
    for (double v : report.final_as) final_as.push_back(json_num(v));
    for (double v : report.final_exp) final_exp.push_back(json_num(v));
    for (double v : report.tail_as) tail_as.push_back(json_num(v));
    return {{"experiment", report.experiment},
            {"master_seed", report.master_seed},
            {"n_seeds", report.n_seeds},
            {"final_as_statistic", std::move(final_as)},
            {"final_exp_statistic", std::move(final_exp)},
            {"tail_as_statistic", std::move(tail_as)},
            {"verdicts", std::move(verdicts)},
            {"all_passed", report.all_passed()},
            {"certificate", certificate_to_json(report.certificate)},
            {"exact_certificate", exact_certificate_to_json(report.exact)},
            {"epsilon", report.epsilon},
            {"epsilon_window", {report.window.lo, report.window.hi}},
            {"runtime_seconds", report.runtime_seconds}};
}

std::string report_to_text(const ReproductionReport& report) {
    std::ostringstream os;
    os << "experiment " << report.experiment << " (seed " << report.master_seed << ", " << report.n_seeds
       << " seeds)\n";
    os << "  certified rate c_tilde = " << format_double(report.certificate.c_tilde)
       << " (c_tilde0 = " << format_double(report.certificate.c_tilde0)
       << ", epsilon = " << format_double(report.epsilon) << ")\n";
    os << "  exact-solution rate gamma_star = " << format_double(report.exact.gamma_star) << "\n";
    for (const CheckVerdict& v : report.verdicts)
        os << "  [" << (v.passed ? "pass" : "FAIL") << "] " << v.name << ": measured "
           << format_double(v.measured) << " vs threshold " << format_double(v.threshold) << "\n";
    os << (report.all_passed() ? "  all checks passed" : "  CHECKS FAILED") << " in "
       << format_double(report.runtime_seconds) << " s\n";
    return os.str();
}

} // namespace mtem
