#pragma once

namespace mtem {

/// Uniform time grid t_k = k*dt with m history points, tau = m*dt exactly.
struct SimulationGrid {
    double dt = 0.1;
    long m = 0;       // history points, k = -m..0 hold the initial data
    long n_steps = 1; // forward steps

    double tau() const { return static_cast<double>(m) * dt; }
    double time_at(long k) const { return static_cast<double>(k) * dt; }

    bool operator==(const SimulationGrid&) const = default;
};

/// Validating constructor. tau/dt must sit within 1e-9 of an integer; m is
/// snapped to that integer and m*dt must then reproduce tau to 1e-12
/// relative. On failure the message lists nearby admissible dt values.
SimulationGrid make_grid(double dt, double tau, long n_steps);

} // namespace mtem
