#include "dpso/cli.hpp"

#include "dpso/chain.hpp"
#include "dpso/error.hpp"
#include "dpso/exactperm.hpp"
#include "dpso/experiments.hpp"
#include "dpso/pso.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace dpso {

namespace {

struct RunArgs {
    std::string problem;
    std::size_t n = 0;
    double c = 0.0;
    std::size_t particles = 1;
    double c_loc = 0.0;
    std::optional<double> c_glob;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;
    std::string format = "csv";
};

struct ChainArgs {
    std::string profile;
    std::size_t n = 0;
    std::string c = "1/2";
    bool exact = false;
};

struct ExactArgs {
    std::string what;
    unsigned n = 0;
    std::string c = "0";
    bool use_float = false;
    std::string kernel = "random";
};

struct ExperimentArgs {
    std::string spec;
    std::string format = "csv";
};

template <class Scalar>
std::string render(const Scalar& x)
{
    if constexpr (std::is_same_v<Scalar, Exact>)
        return to_string(x);
    else
        return format_double(x);
}

// ------------------------------------------------------------------ run

void cmd_run(const RunArgs& a, std::ostream& out)
{
    SwarmConfig cfg;
    cfg.particles = a.particles;
    cfg.c_loc = a.c_loc;
    cfg.c_glob = a.c_glob ? *a.c_glob : a.c;
    cfg.budget = a.budget;
    cfg.validate();
    const Problem problem = parse_problem(a.problem);
    if (a.n < 1)
        throw InvalidInput("--n must be >= 1");
    const SpaceDescriptor desc{problem == Problem::onemax ? SpaceKind::hypercube : SpaceKind::permutations,
                               a.n, std::nullopt};

    std::vector<RunResult> results;
    visit_space(desc, [&](const auto& space) {
        for (std::uint64_t r = 0; r < a.repeats; ++r)
            results.push_back(run(space, cfg, substream_seed(a.seed, r)));
    });

    if (a.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results)
            arr.push_back({{"problem", to_string(problem)},
                           {"n", a.n},
                           {"P", cfg.particles},
                           {"c_loc", cfg.c_loc},
                           {"c_glob", cfg.c_glob},
                           {"seed", std::to_string(r.seed)},
                           {"evaluations", r.evaluations},
                           {"iterations", r.iterations},
                           {"found", r.found},
                           {"best_value", r.best_value}});
        out << arr.dump(2) << '\n';
        return;
    }
    out << "problem,n,P,c_loc,c_glob,seed,evaluations,iterations,found,best_value\n";
    for (const auto& r : results)
        out << to_string(problem) << ',' << a.n << ',' << cfg.particles << ',' << format_double(cfg.c_loc)
            << ',' << format_double(cfg.c_glob) << ',' << r.seed << ',' << r.evaluations << ','
            << r.iterations << ',' << (r.found ? "true" : "false") << ',' << r.best_value << '\n';
}

// ---------------------------------------------------------------- chain

template <class Scalar>
void emit_chain(const BirthDeathSpec<Scalar>& spec, std::ostream& out)
{
    const auto p = clamped(spec);
    const auto H = return_times(spec);
    const auto V = return_time_variances(spec, H);
    out << "i,p_i,H_i,V_i\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        out << i + 1 << ',' << render(p[i]) << ',' << render(H[i]) << ',' << render(V[i]) << '\n';
}

template <class Scalar>
BirthDeathSpec<Scalar> chain_profile(const ChainArgs& a)
{
    const Exact c = parse_exact(a.c);
    if (a.n < 1)
        throw InvalidInput("--n must be >= 1");
    BirthDeathSpec<Scalar> spec;
    if (a.profile.rfind("const:", 0) == 0) {
        const Exact p = parse_exact(std::string_view(a.profile).substr(6));
        spec.p.assign(a.n, from_exact<Scalar>(p));
        return spec;
    }
    if (a.profile == "sort-avg") {
        for (const auto& p : average_improvement_profile(static_cast<unsigned>(a.n), c))
            spec.p.push_back(from_exact<Scalar>(p));
        return spec;
    }
    return standard_profile<Scalar>(parse_profile(a.profile), a.n, c);
}

void cmd_chain(const ChainArgs& a, std::ostream& out)
{
    if (a.exact)
        emit_chain(chain_profile<Exact>(a), out);
    else
        emit_chain(chain_profile<double>(a), out);
}

// ---------------------------------------------------------------- exact

template <class Scalar>
void cmd_exact_mode(const ExactArgs& a, std::ostream& out)
{
    const Exact c = parse_exact(a.c);
    const unsigned n = a.n;
    if (a.what == "sort-walk") {
        const Scalar t = random_walk_sort_time<Scalar>(n);
        out << "n,T_sort,T_sort_over_factorial\n"
            << n << ',' << render(t) << ',' << format_double(to_double(t) / factorial(n).get_d()) << '\n';
    } else if (a.what == "h-table") {
        if (n < 2)
            throw InvalidInput("--n must be >= 2");
        if (std::is_same_v<Scalar, Exact> && n > kExactSolverLimit)
            throw InvalidInput("exact mode is limited to n <= 14; use --float");
        auto table = std::make_shared<const PartitionTable>(n);
        const auto h = hitting_times<Scalar>(improving_move_kernel(table), random_move_kernel(table), c);
        out << "partition,level,count,h\n";
        for (std::size_t s = 0; s < table->size(); ++s) {
            const auto& t = (*table)[s];
            out << to_string(t) << ',' << t.level() << ',' << to_string(permutation_count_of_type(t)) << ','
                << render(h[s]) << '\n';
        }
    } else if (a.what == "qex" || a.what == "qav") {
        const bool ex = a.what == "qex";
        const auto q = ex ? q_ratios<Scalar>(n, c) : q_av_ratio<Scalar>(n, c);
        out << "n,c," << "H1,H1_prev," << (ex ? "q_ex" : "q_av") << ",degree\n";
        out << n << ',' << render(from_exact<Scalar>(c)) << ',' << render(ex ? q.h1_ex : q.h1_av) << ','
            << render(ex ? q.h1_ex_prev : q.h1_av_prev) << ',' << render(ex ? q.q_ex : q.q_av) << ','
            << format_double(ex ? q.degree_ex : q.degree_av) << '\n';
    } else if (a.what == "kernel") {
        if (n < 2)
            throw InvalidInput("--n must be >= 2");
        const auto k = a.kernel == "improving" ? improving_move_kernel(n) : random_move_kernel(n);
        out << "partition,level,target,probability\n";
        for (std::size_t s = 0; s < k.table().size(); ++s) {
            if (!k.defined(s))
                continue;
            const auto& t = k.table()[s];
            for (const auto& e : k.row(s))
                out << to_string(t) << ',' << t.level() << ',' << to_string(k.table()[e.target]) << ','
                    << render(from_exact<Scalar>(e.probability)) << '\n';
        }
    } else {
        throw InvalidInput("unknown exact computation '" + a.what + "'");
    }
}

void cmd_exact(const ExactArgs& a, std::ostream& out)
{
    if (a.use_float)
        cmd_exact_mode<double>(a, out);
    else
        cmd_exact_mode<Exact>(a, out);
}

// --------------------------------------------------------------- bounds

void cmd_bounds(const std::string& c_text, std::ostream& out)
{
    const double c = to_double(parse_exact(c_text));
    if (!(c > 0.0 && c <= 0.5))
        throw InvalidInput("--c must lie in (0, 1/2]");
    constexpr double n = 1000.0;
    const double onemax = base_by_integration([&](double x) { return c + (1 - c) * x / n; }, n);
    const double sort = base_by_integration([&](double x) { return c + (1 - c) * x * x / (n * n); }, n);
    out << "c,alpha,beta,upper,base_onemax,base_sort\n"
        << format_double(c) << ',' << format_double(alpha_base(c)) << ',' << format_double(beta_base(c))
        << ',' << format_double((1 - c) / c) << ',' << format_double(onemax) << ','
        << format_double(sort) << '\n';
}

// ----------------------------------------------------------- experiment

void cmd_experiment(const ExperimentArgs& a, std::ostream& out)
{
    std::ifstream in(a.spec);
    if (!in)
        throw std::runtime_error("cannot read experiment file '" + a.spec + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto rows = run_experiment(parse_experiment_spec(text));
    out << (a.format == "json" ? to_json(rows) : to_csv(rows));
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Discrete particle swarm laboratory", "dpso"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run D-PSO / OnePSO and report evaluations per repetition");
    run_cmd->add_option("--problem", run_args.problem, "onemax or sort")
        ->required()
        ->check(CLI::IsMember({"onemax", "sort"}));
    run_cmd->add_option("--n", run_args.n, "Dimension or number of items")->required();
    run_cmd->add_option("--c", run_args.c, "Attraction probability (c_glob unless --cglob is given)")->required();
    run_cmd->add_option("--particles", run_args.particles, "Swarm size");
    run_cmd->add_option("--cloc", run_args.c_loc, "Local attractor probability");
    run_cmd->add_option("--cglob", run_args.c_glob, "Global attractor probability");
    run_cmd->add_option("--repeats", run_args.repeats, "Independent runs");
    run_cmd->add_option("--seed", run_args.seed, "Master seed");
    run_cmd->add_option("--budget", run_args.budget, "Evaluation cap per run, 0 = unlimited");
    run_cmd->add_option("--format", run_args.format)->check(CLI::IsMember({"csv", "json"}));

    ChainArgs chain_args;
    auto* chain_cmd = app.add_subcommand("chain", "Return times and variances of a birth-death chain");
    chain_cmd->add_option("--profile", chain_args.profile, "onemax | sort-min | sort-max | sort-avg | const:P")
        ->required();
    chain_cmd->add_option("--n", chain_args.n, "Problem size")->required();
    chain_cmd->add_option("--c", chain_args.c, "Attraction probability (fraction or decimal)");
    chain_cmd->add_flag("--exact", chain_args.exact, "Rational arithmetic");

    ExactArgs exact_args;
    auto* exact_cmd = app.add_subcommand("exact", "Exact computations over cycle types");
    exact_cmd->add_option("what", exact_args.what, "sort-walk | h-table | qex | qav | kernel")
        ->required()
        ->check(CLI::IsMember({"sort-walk", "h-table", "qex", "qav", "kernel"}));
    exact_cmd->add_option("--n", exact_args.n, "Number of items")->required();
    exact_cmd->add_option("--c", exact_args.c, "Attraction probability (fraction or decimal)");
    exact_cmd->add_flag("--float", exact_args.use_float, "Double precision instead of rationals");
    exact_cmd->add_option("--kernel", exact_args.kernel, "random or improving")
        ->check(CLI::IsMember({"random", "improving"}));

    std::string bounds_c;
    auto* bounds_cmd = app.add_subcommand("bounds", "Exponential bases for a given c");
    bounds_cmd->add_option("--c", bounds_c, "Attraction probability in (0, 1/2]")->required();

    ExperimentArgs exp_args;
    auto* exp_cmd = app.add_subcommand("experiment", "Monte-Carlo experiment from a JSON file");
    exp_cmd->add_option("--spec", exp_args.spec, "Experiment file")->required();
    exp_cmd->add_option("--format", exp_args.format)->check(CLI::IsMember({"csv", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*run_cmd)
            cmd_run(run_args, out);
        else if (*chain_cmd)
            cmd_chain(chain_args, out);
        else if (*exact_cmd)
            cmd_exact(exact_args, out);
        else if (*bounds_cmd)
            cmd_bounds(bounds_c, out);
        else if (*exp_cmd)
            cmd_experiment(exp_args, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace dpso
