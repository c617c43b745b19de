#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtem/experiments.hpp"
#include "mtem/integrator.hpp"
#include "mtem/stability.hpp"
#include "mtem/validation.hpp"

namespace mtem {

/// Shortest round-trip decimal form, locale independent ('.' decimal point).
std::string format_double(double v);

/// Single path: header "k,t,x_1..x_n", one row per k = -m..n_steps.
void write_path_csv(std::ostream& os, const PathRecord& path);

/// Ensemble: same layout with a leading path_index column; paths appear in
/// index order so the bytes do not depend on worker scheduling.
void write_ensemble_csv(std::ostream& os, const std::vector<PathRecord>& ensemble);

/// Plot data: header "k,t,as_statistic,exp_statistic", k = 1..n_steps.
void write_decay_csv(std::ostream& os, const DecayStatistics& stats);

nlohmann::json path_to_json(const PathRecord& path);
nlohmann::json ensemble_to_json(const std::vector<PathRecord>& ensemble);
nlohmann::json certificate_to_json(const RateCertificate& cert);
nlohmann::json exact_certificate_to_json(const ExactRateCertificate& cert);
nlohmann::json validation_to_json(const ValidationReport& report);
nlohmann::json compatibility_to_json(const CompatibilityReport& report);
nlohmann::json counting_to_json(const CountingReport& report);
nlohmann::json report_to_json(const ReproductionReport& report);
std::string report_to_text(const ReproductionReport& report);

} // namespace mtem
