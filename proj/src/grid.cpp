#include "mtem/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mtem/io.hpp"

namespace mtem {

namespace {

// dt values with a short decimal form near tau/m, for the error message
std::vector<double> admissible_dts(double tau, double dt) {
    std::vector<double> out;
    const long m_lo = std::max(1L, static_cast<long>(std::floor(tau / dt)));
    for (long m = m_lo; m <= m_lo + 100 && out.size() < 4; ++m) {
        const double cand = tau / static_cast<double>(m);
        const double scaled = cand * 1e6;
        if (std::abs(scaled - std::round(scaled)) <= 1e-3) out.push_back(std::round(scaled) / 1e6);
    }
    return out;
}

} // namespace

SimulationGrid make_grid(double dt, double tau, long n_steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("make_grid: dt must be positive");
    if (tau < 0.0) throw std::invalid_argument("make_grid: negative delay");
    if (n_steps < 1) throw std::invalid_argument("make_grid: n_steps must be at least 1");

    const double ratio = tau / dt;
    const double snapped = std::round(ratio);
    const long m = static_cast<long>(snapped);
    const double residual = static_cast<double>(m) * dt - tau;
    if (std::abs(ratio - snapped) > 1e-9 || std::abs(residual) > 1e-12 * std::max(1.0, tau)) {
        std::ostringstream msg;
        msg << "make_grid: tau/dt = " << format_double(ratio)
            << " is not within 1e-9 of an integer, so the delay is not representable on the grid";
        const std::vector<double> suggestions = admissible_dts(tau, dt);
        if (!suggestions.empty()) {
            msg << "; nearest admissible dt:";
            for (std::size_t i = 0; i < suggestions.size(); ++i)
                msg << (i ? ", " : " ") << format_double(suggestions[i]);
        }
        throw std::invalid_argument(msg.str());
    }

    SimulationGrid g;
    g.dt = dt;
    g.m = m;
    g.n_steps = n_steps;
    return g;
}

} // namespace mtem
