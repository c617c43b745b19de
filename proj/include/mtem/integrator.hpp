#pragma once

#include <cstdint>
#include <vector>

#include "mtem/brownian.hpp"
#include "mtem/errors.hpp"
#include "mtem/grid.hpp"
#include "mtem/linalg.hpp"
#include "mtem/model.hpp"
#include "mtem/truncation.hpp"

namespace mtem {

/// One simulated trajectory. States are stored flat, row k+m holds X_k for
/// k = -m..n_steps; rows -m..0 are the sampled initial history.
struct PathRecord {
    SimulationGrid grid;
    int state_dim = 1;
    std::vector<double> data;
    std::uint64_t master_seed = 0;
    std::uint32_t path_index = 0;
    double truncation_level = 0.0;

    const double* state_ptr(long k) const { return data.data() + (k + grid.m) * state_dim; }
};

/// X_k as a vector; k may reach back into the history segment.
Vec lookup_state(const PathRecord& path, long k);

/// floor(delta(k*dt)/dt) with the small upward guard of floor_with_guard,
/// clamped so that k - lag never reaches below -m.
long delay_lag(long k, const SimulationGrid& grid, const DelayFunction& delay);

/// X_{k+1} = x + f_trunc(x, x_delayed, t) dt + g_trunc(x, x_delayed, t) dW.
/// step_index and path_index only label error messages.
Vec mtem_step(const Vec& x, const Vec& x_delayed, double t, double dt, const TruncatedCoefficients& tc,
              const Vec& dW, long step_index = 0, std::uint32_t path_index = 0);

PathRecord simulate_path(const SddeProblem& problem, const TruncationPolicy& policy, const SimulationGrid& grid,
                         const BrownianSource& source, std::uint32_t path_index);

/// Monte Carlo ensemble; path i uses path_index = i. n_workers = 0 picks the
/// worker count from MTEM_THREADS or the hardware. Results are identical for
/// every worker count.
std::vector<PathRecord> simulate_ensemble(const SddeProblem& problem, const TruncationPolicy& policy,
                                          const SimulationGrid& grid, std::uint64_t master_seed, long n_paths,
                                          int n_workers = 0);

} // namespace mtem
