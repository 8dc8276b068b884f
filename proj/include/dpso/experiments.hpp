#pragma once

#include "dpso/chain.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpso {

enum class Problem { onemax, sort };
enum class Measurement { return_time, optimization_time };

std::string to_string(Problem p);
std::string to_string(Measurement m);
Problem parse_problem(std::string_view name);
Measurement parse_measurement(std::string_view name);

struct SummaryStats {
    std::uint64_t count = 0;
    /// Samples that hit the budget; they are excluded from the moments.
    std::uint64_t censored = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double standard_error = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Welford accumulator with Chan's pairwise merge.
class Moments {
public:
    void add(double x);
    void add_censored() { ++censored_; }
    void merge(const Moments& other);
    SummaryStats summary() const;

private:
    std::uint64_t n_ = 0;
    std::uint64_t censored_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

/// Worker threads for repetitions: DPSO_THREADS if set and positive,
/// otherwise the hardware concurrency.
unsigned worker_count();

/// Evaluates sample(r) for r = 0..repeats-1 on worker_count() threads. A
/// nullopt sample counts as censored. Samples are grouped into fixed chunks
/// and merged in chunk order, so the result does not depend on the thread count.
SummaryStats collect(std::uint64_t repeats, const std::function<std::optional<double>(std::uint64_t)>& sample,
                     unsigned workers = 0);

/// One (problem, n, c) cell of an experiment.
struct Cell {
    Problem problem = Problem::onemax;
    std::size_t n = 1;
    double c = 0.5;
    std::size_t particles = 1;
    double c_loc = 0.0;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 1;
    /// Per-sample step or evaluation cap; 0 picks 10^6 for c < 1/2 and unlimited otherwise.
    std::uint64_t budget = 0;
    Measurement measurement = Measurement::return_time;

    std::uint64_t effective_budget() const;
};

struct ExperimentSpec {
    Problem problem = Problem::onemax;
    std::vector<std::size_t> n;
    std::vector<double> c;
    std::size_t particles = 1;
    double c_loc = 0.0;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;
    Measurement measurement = Measurement::return_time;

    /// Cells in n-major order.
    std::vector<Cell> cells() const;
};

/// Reads {"problem", "n", "c", "particles", "c_loc", "repeats", "seed",
/// "budget", "measurement"}; n and c accept a number or an array.
ExperimentSpec parse_experiment_spec(std::string_view json_text);

/// Frozen-attractor return times from distance 1, repetition r seeded with
/// substream_seed(cell.seed, r).
SummaryStats estimate_return_time(const Cell& cell);

/// Evaluations until the optimum is found, over full swarm runs.
SummaryStats estimate_optimization_time(const Cell& cell);

/// Direct simulation of W_1 on a birth-death chain.
SummaryStats estimate_chain_return_time(const BirthDeathSpec<double>& spec, std::uint64_t repeats,
                                        std::uint64_t seed, std::uint64_t budget = 0);

/// Expected value of the cell's measurement where it is known exactly, NaN otherwise.
/// Return times come from the birth-death chain (OneMax) or the cycle-type
/// solver (sorting). Optimization times are known for OnePSO on OneMax at
/// c ∈ {0, 1} and on sorting at c = 0; they include the initial evaluation.
double analytic_value(const Cell& cell);

struct ComparisonReport {
    double analytic = 0.0;
    SummaryStats empirical;
    double z = 0.0;
    bool has_analytic = false;
    bool pass = false;
    bool infinite_z = false;
    double relative_error = 0.0;
    /// 1/sqrt(T), the relative precision expected from T samples.
    double reference_error = 0.0;

    std::string verdict() const;
};

/// z = (mean - analytic)/stderr with a 3σ verdict. A zero standard error
/// passes only on an exact match and flags an infinite z otherwise.
ComparisonReport compare(double analytic, const SummaryStats& empirical);

struct ExperimentRow {
    Cell cell;
    ComparisonReport report;
};

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

std::string experiment_csv_header();
std::string to_csv(const std::vector<ExperimentRow>& rows);
std::string to_json(const std::vector<ExperimentRow>& rows);

struct ScalingStep {
    double n = 0.0;
    double ratio = 0.0;
    /// ratio^{1/(n - n_prev)}
    double base = 0.0;
    /// log(ratio)/log(n/n_prev)
    double degree = 0.0;
};

/// Step-wise growth of a sequence of (n, value) pairs with increasing n and positive values.
std::vector<ScalingStep> scaling_diagnostic(const std::vector<std::pair<double, double>>& values);

/// "%.12g"
std::string format_double(double x);

} // namespace dpso
