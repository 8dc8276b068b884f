#include "dpso/experiments.hpp"

#include "dpso/error.hpp"
#include "dpso/exactperm.hpp"
#include "dpso/pso.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace dpso {

std::string to_string(Problem p) { return p == Problem::onemax ? "onemax" : "sort"; }

std::string to_string(Measurement m)
{
    return m == Measurement::return_time ? "return-time" : "optimization-time";
}

Problem parse_problem(std::string_view name)
{
    if (name == "onemax")
        return Problem::onemax;
    if (name == "sort")
        return Problem::sort;
    throw InvalidInput("unknown problem '" + std::string(name) + "' (expected onemax or sort)");
}

Measurement parse_measurement(std::string_view name)
{
    if (name == "return-time")
        return Measurement::return_time;
    if (name == "optimization-time")
        return Measurement::optimization_time;
    throw InvalidInput("unknown measurement '" + std::string(name) + "'");
}

std::string format_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------- moments

void Moments::add(double x)
{
    ++n_;
    if (n_ == 1) {
        min_ = max_ = x;
    } else {
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void Moments::merge(const Moments& other)
{
    censored_ += other.censored_;
    if (other.n_ == 0)
        return;
    if (n_ == 0) {
        const auto c = censored_;
        *this = other;
        censored_ = c;
        return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

SummaryStats Moments::summary() const
{
    SummaryStats s;
    s.count = n_;
    s.censored = censored_;
    s.mean = mean_;
    s.variance = n_ > 1 ? std::max(0.0, m2_ / static_cast<double>(n_ - 1)) : 0.0;
    s.standard_error = n_ > 0 ? std::sqrt(s.variance / static_cast<double>(n_)) : 0.0;
    s.min = min_;
    s.max = max_;
    return s;
}

unsigned worker_count()
{
    if (const char* env = std::getenv("DPSO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

SummaryStats collect(std::uint64_t repeats,
                     const std::function<std::optional<double>(std::uint64_t)>& sample, unsigned workers)
{
    constexpr std::uint64_t chunk = 1024;
    const std::uint64_t chunks = (repeats + chunk - 1) / chunk;
    std::vector<Moments> parts(chunks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t k; (k = next.fetch_add(1)) < chunks;) {
            Moments m;
            const std::uint64_t end = std::min(repeats, (k + 1) * chunk);
            for (std::uint64_t r = k * chunk; r < end; ++r) {
                if (auto v = sample(r))
                    m.add(*v);
                else
                    m.add_censored();
            }
            parts[k] = m;
        }
    };
    if (workers == 0)
        workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(chunks, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    Moments total;
    for (const auto& m : parts)
        total.merge(m);
    return total.summary();
}

// ------------------------------------------------------------------ cells

std::uint64_t Cell::effective_budget() const
{
    if (budget)
        return budget;
    return c < 0.5 ? 1'000'000 : 0;
}

std::vector<Cell> ExperimentSpec::cells() const
{
    if (n.empty() || c.empty())
        throw InvalidInput("experiment grids must be non-empty");
    if (repeats < 1)
        throw InvalidInput("repeats must be >= 1");
    std::vector<Cell> out;
    for (auto nn : n)
        for (auto cc : c) {
            Cell cell;
            cell.problem = problem;
            cell.n = nn;
            cell.c = cc;
            cell.particles = particles;
            cell.c_loc = c_loc;
            cell.repeats = repeats;
            cell.seed = seed;
            cell.budget = budget;
            cell.measurement = measurement;
            out.push_back(cell);
        }
    return out;
}

ExperimentSpec parse_experiment_spec(std::string_view json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed experiment file: ") + e.what());
    }
    if (!j.is_object())
        throw InvalidInput("experiment file must hold a JSON object");
    static const std::vector<std::string> known = {"problem", "n",       "c",      "particles", "c_loc",
                                                   "repeats", "seed",    "budget", "measurement"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidInput("unknown experiment field '" + key + "'");
    try {
        ExperimentSpec spec;
        spec.problem = parse_problem(j.at("problem").get<std::string>());
        auto grid = [&](const char* key, auto& out) {
            const auto& v = j.at(key);
            using T = typename std::decay_t<decltype(out)>::value_type;
            if (v.is_array())
                out = v.get<std::vector<T>>();
            else
                out = {v.get<T>()};
        };
        grid("n", spec.n);
        grid("c", spec.c);
        spec.particles = j.value("particles", std::size_t{1});
        spec.c_loc = j.value("c_loc", 0.0);
        spec.repeats = j.value("repeats", std::uint64_t{1});
        spec.seed = j.value("seed", std::uint64_t{1});
        spec.budget = j.value("budget", std::uint64_t{0});
        spec.measurement = parse_measurement(j.value("measurement", std::string("return-time")));
        for (auto c : spec.c)
            if (!(c >= 0.0 && c <= 1.0))
                throw InvalidInput("c values must lie in [0, 1]");
        spec.cells();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad experiment field: ") + e.what());
    }
}

// ------------------------------------------------------------ estimators

SummaryStats estimate_return_time(const Cell& cell)
{
    if (cell.particles != 1)
        throw InvalidInput("return-time cells use a single particle");
    if (!(cell.c >= 0.0 && cell.c <= 1.0))
        throw InvalidInput("c must lie in [0, 1]");
    const std::uint64_t budget = cell.effective_budget();
    return visit_space(SpaceDescriptor{cell.problem == Problem::onemax ? SpaceKind::hypercube
                                                                         : SpaceKind::permutations,
                                       cell.n, std::nullopt},
                       [&](const auto& space) {
                           const auto anchor = space.target();
                           return collect(cell.repeats, [&](std::uint64_t r) -> std::optional<double> {
                               const auto s = frozen_attractor_return_time(
                                   space, anchor, cell.c, 1, substream_seed(cell.seed, r), budget);
                               if (s.censored)
                                   return std::nullopt;
                               return static_cast<double>(s.steps);
                           });
                       });
}

SummaryStats estimate_optimization_time(const Cell& cell)
{
    SwarmConfig cfg;
    cfg.particles = cell.particles;
    cfg.c_loc = cell.c_loc;
    cfg.c_glob = cell.c;
    cfg.budget = cell.effective_budget();
    cfg.validate();
    return visit_space(SpaceDescriptor{cell.problem == Problem::onemax ? SpaceKind::hypercube
                                                                         : SpaceKind::permutations,
                                       cell.n, std::nullopt},
                       [&](const auto& space) {
                           return collect(cell.repeats, [&](std::uint64_t r) -> std::optional<double> {
                               const auto res = run(space, cfg, substream_seed(cell.seed, r));
                               if (!res.found)
                                   return std::nullopt;
                               return static_cast<double>(res.evaluations);
                           });
                       });
}

SummaryStats estimate_chain_return_time(const BirthDeathSpec<double>& spec, std::uint64_t repeats,
                                        std::uint64_t seed, std::uint64_t budget)
{
    const auto p = clamped(spec);
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == 0)
            throw UndefinedReturnTime("zero probability below the top state");
    return collect(repeats, [&](std::uint64_t r) -> std::optional<double> {
        Rng rng(substream_seed(seed, r));
        std::size_t state = 1;
        std::uint64_t steps = 0;
        while (state > 0) {
            if (budget && steps >= budget)
                return std::nullopt;
            if (rng.uniform01() < p[state - 1])
                --state;
            else
                ++state;
            ++steps;
        }
        return static_cast<double>(steps);
    });
}

// -------------------------------------------------------------- analytic

namespace {

/// P(D = d) for D ~ Bin(n, 1/2).
std::vector<double> half_binomial(std::size_t n)
{
    std::vector<double> pmf(n + 1);
    for (std::size_t d = 0; d <= n; ++d)
        pmf[d] = std::exp(std::lgamma(n + 1.0) - std::lgamma(d + 1.0) - std::lgamma(n - d + 1.0)
                          - static_cast<double>(n) * std::log(2.0));
    return pmf;
}

} // namespace

double analytic_value(const Cell& cell)
{
    constexpr double none = std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = cell.n;
    const Exact c(cell.c);
    if (cell.measurement == Measurement::return_time) {
        if (cell.particles != 1)
            return none;
        if (cell.problem == Problem::onemax) {
            if (n == 1)
                return 1.0;
            return return_times(standard_profile<double>(Profile::onemax, n, c)).front();
        }
        if (n < 2)
            return none;
        return exact_return_time_sorting<double>(static_cast<unsigned>(n), c);
    }

    if (cell.particles != 1 || cell.c_loc != 0.0)
        return none;
    if (cell.problem == Problem::onemax) {
        const auto pmf = half_binomial(n);
        if (cell.c == 1.0) {
            // each failed attempt at level i costs a step away and a forced step back
            double total = 1.0, tail = 1.0;
            for (std::size_t i = 1; i <= n; ++i) {
                tail -= pmf[i - 1];
                total += std::max(0.0, tail) * (2.0 * (static_cast<double>(n) / i - 1.0) + 1.0);
            }
            return total;
        }
        if (cell.c == 0.0) {
            BirthDeathSpec<double> walk;
            for (std::size_t i = 1; i <= n; ++i)
                walk.p.push_back(static_cast<double>(i) / n);
            const auto H = return_times(walk);
            double total = 1.0, cumulative = 0.0;
            for (std::size_t d = 1; d <= n; ++d) {
                cumulative += H[d - 1];
                total += pmf[d] * cumulative;
            }
            return total;
        }
        return none;
    }
    if (cell.c == 0.0 && n >= 2)
        return 1.0 + random_walk_sort_time<double>(static_cast<unsigned>(n));
    return none;
}

std::string ComparisonReport::verdict() const
{
    if (!has_analytic)
        return "n/a";
    return pass ? "pass" : "fail";
}

ComparisonReport compare(double analytic, const SummaryStats& empirical)
{
    ComparisonReport r;
    r.analytic = analytic;
    r.empirical = empirical;
    r.reference_error = empirical.count ? 1.0 / std::sqrt(static_cast<double>(empirical.count)) : 0.0;
    r.has_analytic = std::isfinite(analytic);
    if (!r.has_analytic) {
        r.z = std::numeric_limits<double>::quiet_NaN();
        r.relative_error = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.relative_error = analytic != 0.0 ? (empirical.mean - analytic) / analytic
                                       : std::numeric_limits<double>::quiet_NaN();
    if (empirical.count == 0) {
        r.z = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    if (empirical.standard_error > 0.0) {
        r.z = (empirical.mean - analytic) / empirical.standard_error;
        r.pass = std::abs(r.z) <= 3.0;
    } else if (empirical.mean == analytic) {
        r.z = 0.0;
        r.pass = true;
    } else {
        r.z = empirical.mean > analytic ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
        r.infinite_z = true;
    }
    return r;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec)
{
    std::vector<ExperimentRow> rows;
    for (const auto& cell : spec.cells()) {
        const SummaryStats stats = cell.measurement == Measurement::return_time
                                       ? estimate_return_time(cell)
                                       : estimate_optimization_time(cell);
        rows.push_back({cell, compare(analytic_value(cell), stats)});
    }
    return rows;
}

std::string experiment_csv_header()
{
    return "problem,n,c,P,measurement,repeats,censored,mean,variance,stderr,analytic,z,verdict";
}

std::string to_csv(const std::vector<ExperimentRow>& rows)
{
    std::ostringstream out;
    out << experiment_csv_header() << '\n';
    for (const auto& [cell, rep] : rows) {
        out << to_string(cell.problem) << ',' << cell.n << ',' << format_double(cell.c) << ','
            << cell.particles << ',' << to_string(cell.measurement) << ',' << cell.repeats << ','
            << rep.empirical.censored << ',' << format_double(rep.empirical.mean) << ','
            << format_double(rep.empirical.variance) << ',' << format_double(rep.empirical.standard_error)
            << ',' << format_double(rep.analytic) << ',' << format_double(rep.z) << ',' << rep.verdict()
            << '\n';
    }
    return out.str();
}

std::string to_json(const std::vector<ExperimentRow>& rows)
{
    auto number = [](double x) -> nlohmann::json {
        if (std::isfinite(x))
            return x;
        return nullptr;
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [cell, rep] : rows) {
        arr.push_back({{"problem", to_string(cell.problem)},
                       {"n", cell.n},
                       {"c", cell.c},
                       {"P", cell.particles},
                       {"measurement", to_string(cell.measurement)},
                       {"repeats", cell.repeats},
                       {"censored", rep.empirical.censored},
                       {"mean", number(rep.empirical.mean)},
                       {"variance", number(rep.empirical.variance)},
                       {"stderr", number(rep.empirical.standard_error)},
                       {"analytic", number(rep.analytic)},
                       {"z", number(rep.z)},
                       {"verdict", rep.verdict()}});
    }
    return arr.dump(2) + "\n";
}

std::vector<ScalingStep> scaling_diagnostic(const std::vector<std::pair<double, double>>& values)
{
    for (const auto& [n, v] : values)
        if (!(v > 0.0))
            throw InvalidInput("scaling diagnostic needs positive values");
    std::vector<ScalingStep> steps;
    for (std::size_t k = 1; k < values.size(); ++k) {
        const auto [n0, v0] = values[k - 1];
        const auto [n1, v1] = values[k];
        if (!(n1 > n0) || !(n0 > 0.0))
            throw InvalidInput("scaling diagnostic needs positive, increasing n");
        ScalingStep s;
        s.n = n1;
        s.ratio = v1 / v0;
        s.base = std::pow(s.ratio, 1.0 / (n1 - n0));
        s.degree = std::log(s.ratio) / std::log(n1 / n0);
        steps.push_back(s);
    }
    return steps;
}

} // namespace dpso
