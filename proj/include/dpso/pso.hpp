#pragma once

#include "dpso/error.hpp"
#include "dpso/rng.hpp"
#include "dpso/spaces.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dpso {

enum class AttractorUpdate { strict, non_strict };

struct SwarmConfig {
    std::size_t particles = 1;
    double c_loc = 0.0;
    double c_glob = 0.0;
    AttractorUpdate update = AttractorUpdate::strict;
    /// Maximum number of objective evaluations; 0 means unlimited.
    std::uint64_t budget = 0;

    /// OnePSO: a single particle attracted by its best point with probability c.
    static SwarmConfig one_pso(double c, std::uint64_t budget = 0)
    {
        SwarmConfig cfg;
        cfg.c_glob = c;
        cfg.budget = budget;
        return cfg;
    }

    void validate() const
    {
        if (particles < 1)
            throw InvalidInput("need at least one particle");
        if (!(c_loc >= 0.0 && c_loc <= 1.0))
            throw InvalidInput("c_loc must lie in [0, 1]");
        if (!(c_glob >= 0.0 && c_glob <= 1.0 - c_loc + 1e-12))
            throw InvalidInput("c_glob must lie in [0, 1 - c_loc]");
    }
};

struct RunResult {
    /// Evaluations up to and including the first optimal one (or all spent evaluations).
    std::uint64_t evaluations = 0;
    /// Sweeps over the swarm, the initialization sweep included.
    std::uint64_t iterations = 0;
    std::uint64_t attractor_updates = 0;
    std::size_t best_value = 0;
    bool found = false;
    std::uint64_t seed = 0;
    /// Restarts consumed (1 for a plain run).
    std::uint64_t runs = 1;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

template <SearchSpace S>
struct SwarmState {
    using Point = typename S::Point;

    std::vector<Point> x;
    std::vector<Point> local;
    std::vector<std::size_t> f_local;
    Point global;
    std::size_t f_global = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
    std::uint64_t attractor_updates = 0;
};

namespace detail {

inline bool improves(std::size_t candidate, std::size_t incumbent, AttractorUpdate mode)
{
    return mode == AttractorUpdate::strict ? candidate < incumbent : candidate <= incumbent;
}

} // namespace detail

/// Draws the initial swarm: uniform positions, l_i = x_i, g = best l_i.
/// Stops early when an initial position is optimal or the budget runs out.
template <SearchSpace S>
SwarmState<S> initialize_swarm(const S& space, const SwarmConfig& cfg, Rng& rng)
{
    SwarmState<S> st;
    st.iterations = 1;
    for (std::size_t i = 0; i < cfg.particles; ++i) {
        if (cfg.budget && st.evaluations >= cfg.budget)
            break;
        auto p = space.sample_uniform(rng);
        const std::size_t f = space.objective(p);
        ++st.evaluations;
        st.x.push_back(p);
        st.local.push_back(p);
        st.f_local.push_back(f);
        if (i == 0 || f < st.f_global) {
            st.global = std::move(p);
            st.f_global = f;
        }
        if (f == 0)
            break;
    }
    return st;
}

/// One step of particle i: a move toward l_i with probability c_loc (when
/// x ≠ l ≠ g), toward g with probability c_glob (when x ≠ g), otherwise to a
/// uniform neighbor; then one evaluation and the attractor updates.
template <SearchSpace S>
void particle_move(const S& space, SwarmState<S>& st, std::size_t i, const SwarmConfig& cfg, Rng& rng)
{
    auto& x = st.x[i];
    auto& l = st.local[i];
    const double q = rng.uniform01();
    if (q <= cfg.c_loc && x != l && l != st.global)
        space.move_toward(x, l, rng);
    else if (q > 1.0 - cfg.c_glob && x != st.global)
        space.move_toward(x, st.global, rng);
    else
        space.move_to_random_neighbor(x, rng);

    const std::size_t f = space.objective(x);
    ++st.evaluations;
    if (detail::improves(f, st.f_local[i], cfg.update)) {
        l = x;
        st.f_local[i] = f;
    }
    if (detail::improves(f, st.f_global, cfg.update)) {
        st.global = x;
        st.f_global = f;
        ++st.attractor_updates;
    }
}

/// Runs the swarm from a fresh uniform start until the optimum (objective 0)
/// is evaluated or the budget is spent. Fully determined by `seed`.
template <SearchSpace S>
RunResult run(const S& space, const SwarmConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Rng rng(seed);
    auto st = initialize_swarm(space, cfg, rng);
    auto result = [&](bool found) {
        RunResult r;
        r.evaluations = st.evaluations;
        r.iterations = st.iterations;
        r.attractor_updates = st.attractor_updates;
        r.best_value = st.f_global;
        r.found = found;
        r.seed = seed;
        return r;
    };
    if (st.f_global == 0)
        return result(true);
    if (st.x.size() < cfg.particles)
        return result(false);
    for (;;) {
        ++st.iterations;
        for (std::size_t i = 0; i < cfg.particles; ++i) {
            if (cfg.budget && st.evaluations >= cfg.budget)
                return result(false);
            particle_move(space, st, i, cfg, rng);
            if (st.f_global == 0)
                return result(true);
        }
    }
}

struct ReturnSample {
    std::uint64_t steps = 0;
    /// True when the budget ran out before the anchor was reached.
    bool censored = false;
};

/// One sample of the return time W_d: start uniformly at distance d from a
/// fixed anchor and count OnePSO steps (toward the anchor with probability c,
/// otherwise uniform) until the anchor is reached. budget 0 means unlimited.
template <SearchSpace S>
ReturnSample frozen_attractor_return_time(const S& space, const typename S::Point& anchor, double c,
                                          std::size_t start_distance, std::uint64_t seed,
                                          std::uint64_t budget = 0)
{
    if (start_distance < 1)
        throw InvalidInput("start distance must be >= 1");
    if (start_distance > space.diameter())
        throw InvalidInput("start distance exceeds the diameter");
    Rng rng(seed);
    auto x = space.sample_at_distance(anchor, start_distance, rng);
    ReturnSample out;
    while (x != anchor) {
        if (budget && out.steps >= budget) {
            out.censored = true;
            return out;
        }
        if (rng.uniform01() > 1.0 - c)
            space.move_toward(x, anchor, rng);
        else
            space.move_to_random_neighbor(x, rng);
        ++out.steps;
    }
    return out;
}

/// Independent restarts with seeds substream_seed(seed, r) until one run
/// succeeds or max_runs is reached. Totals are summed over all runs; the
/// reported seed is that of the last run.
template <SearchSpace S>
RunResult restart_runner(const S& space, SwarmConfig cfg, std::uint64_t budget_per_run,
                         std::uint64_t max_runs, std::uint64_t seed)
{
    if (budget_per_run < 1 || max_runs < 1)
        throw InvalidInput("restart runner needs budget_per_run >= 1 and max_runs >= 1");
    cfg.budget = budget_per_run;
    RunResult total;
    total.runs = 0;
    for (std::uint64_t r = 0; r < max_runs; ++r) {
        const RunResult one = run(space, cfg, substream_seed(seed, r));
        total.evaluations += one.evaluations;
        total.iterations += one.iterations;
        total.attractor_updates += one.attractor_updates;
        total.best_value = r == 0 ? one.best_value : std::min(total.best_value, one.best_value);
        total.seed = one.seed;
        total.runs = r + 1;
        if (one.found) {
            total.found = true;
            break;
        }
    }
    return total;
}

} // namespace dpso
