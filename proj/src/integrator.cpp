#include "mtem/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mtem/numeric.hpp"

namespace mtem {

Vec lookup_state(const PathRecord& path, long k) {
    const long last = static_cast<long>(path.data.size()) / path.state_dim - 1 - path.grid.m;
    if (k < -path.grid.m || k > last) throw std::out_of_range("lookup_state: index before history window");
    const double* p = path.state_ptr(k);
    return Vec(p, p + path.state_dim);
}

long delay_lag(long k, const SimulationGrid& grid, const DelayFunction& delay) {
    if (k < 0) throw std::invalid_argument("delay_lag: k must be nonnegative");
    const double d = delay(grid.time_at(k));
    if (!(d >= 0.0)) throw std::invalid_argument("delay_lag: negative delay");
    long lag = floor_with_guard(d / grid.dt);
    // float noise must not push the delayed index below the history segment
    lag = std::min(lag, k + grid.m);
    return lag;
}

Vec mtem_step(const Vec& x, const Vec& x_delayed, double t, double dt, const TruncatedCoefficients& tc,
              const Vec& dW, long step_index, std::uint32_t path_index) {
    Vec next(x);
    try {
        const Vec f = truncated_drift(tc, x, x_delayed, t);
        const Mat g = truncated_diffusion(tc, x, x_delayed, t);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += f[i] * dt;
        matvec_accumulate(g, dW, next);
    } catch (const std::runtime_error&) {
        std::ostringstream msg;
        msg << "mtem_step: coefficient overflow at step " << step_index;
        throw OverflowError(msg.str(), step_index, path_index);
    }
    if (!all_finite(next) || norm(next) > 1e150) {
        std::ostringstream msg;
        msg << "mtem_step: state overflow at step " << step_index;
        throw OverflowError(msg.str(), step_index, path_index);
    }
    return next;
}

PathRecord simulate_path(const SddeProblem& problem, const TruncationPolicy& policy, const SimulationGrid& grid,
                         const BrownianSource& source, std::uint32_t path_index) {
    const double tau = problem.delay.tau;
    if (std::abs(grid.tau() - tau) > 1e-9 * std::max(1.0, tau))
        throw std::invalid_argument("simulate_path: grid does not represent the problem delay");
    if (source.dimension() != problem.coefficients.noise_dim)
        throw std::invalid_argument("simulate_path: noise dimension mismatch");

    const TruncatedCoefficients tc = make_truncated(problem.coefficients, policy, grid.dt);
    const int n = problem.coefficients.state_dim;

    PathRecord path;
    path.grid = grid;
    path.state_dim = n;
    path.master_seed = source.master_seed();
    path.path_index = path_index;
    path.truncation_level = tc.level;
    path.data.assign(static_cast<std::size_t>(grid.m + grid.n_steps + 1) * n, 0.0);

    for (long k = -grid.m; k <= 0; ++k) {
        const Vec v = problem.history.xi(grid.time_at(k));
        if (static_cast<int>(v.size()) != n)
            throw std::invalid_argument("simulate_path: history dimension mismatch");
        if (!all_finite(v)) throw OverflowError("simulate_path: non-finite initial history", k, path_index);
        std::copy(v.begin(), v.end(), path.data.begin() + (k + grid.m) * n);
    }

    for (long k = 0; k < grid.n_steps; ++k) {
        const Vec x = lookup_state(path, k);
        const Vec x_delayed = lookup_state(path, k - delay_lag(k, grid, problem.delay));
        const Vec dW = source.increment(path_index, static_cast<std::uint64_t>(k), grid.dt);
        const Vec next = mtem_step(x, x_delayed, grid.time_at(k), grid.dt, tc, dW, k, path_index);
        std::copy(next.begin(), next.end(), path.data.begin() + (k + 1 + grid.m) * n);
    }
    return path;
}

namespace {

int resolve_workers(int n_workers, long n_paths) {
    if (n_workers <= 0) {
        if (const char* env = std::getenv("MTEM_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) n_workers = static_cast<int>(std::min(v, 256L));
        }
    }
    if (n_workers <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        n_workers = hc ? static_cast<int>(std::min(hc, 16u)) : 4;
    }
    return static_cast<int>(std::min<long>(n_workers, n_paths));
}

} // namespace

std::vector<PathRecord> simulate_ensemble(const SddeProblem& problem, const TruncationPolicy& policy,
                                          const SimulationGrid& grid, std::uint64_t master_seed, long n_paths,
                                          int n_workers) {
    if (n_paths < 1) throw std::invalid_argument("simulate_ensemble: n_paths must be at least 1");
    const BrownianSource source(master_seed, problem.coefficients.noise_dim);
    const int workers = resolve_workers(n_workers, n_paths);

    std::vector<PathRecord> out(static_cast<std::size_t>(n_paths));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_paths));
    std::atomic<long> cursor{0};

    auto run = [&]() {
        for (;;) {
            const long i = cursor.fetch_add(1);
            if (i >= n_paths) return;
            try {
                out[static_cast<std::size_t>(i)] =
                    simulate_path(problem, policy, grid, source, static_cast<std::uint32_t>(i));
            } catch (...) {
                failures[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (std::thread& th : pool) th.join();
    }

    // deterministic error selection: the lowest failing path index wins
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);
    return out;
}

} // namespace mtem
