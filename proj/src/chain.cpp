#include "dpso/chain.hpp"

#include "dpso/error.hpp"
#include "dpso/quadrature.hpp"

#include <cmath>

namespace dpso {

namespace {

template <class Scalar>
Scalar power(const Scalar& base, std::size_t e)
{
    if constexpr (std::is_same_v<Scalar, Exact>)
        return pow(base, static_cast<unsigned long>(e));
    else
        return std::pow(base, static_cast<double>(e));
}

template <class Scalar>
std::vector<Scalar> positive_clamped(const BirthDeathSpec<Scalar>& spec)
{
    auto p = clamped(spec);
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == 0)
            throw UndefinedReturnTime("p_" + std::to_string(i + 1)
                                      + " is zero; the chain never returns");
    return p;
}

} // namespace

template <class Scalar>
std::vector<Scalar> clamped(const BirthDeathSpec<Scalar>& spec)
{
    if (spec.p.empty())
        throw InvalidInput("a chain needs n >= 1 states");
    std::vector<Scalar> p(spec.p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Scalar& raw = spec.p[i];
        if (raw < 0 || (std::is_floating_point_v<Scalar> && !(raw == raw)))
            throw InvalidInput("probability p_" + std::to_string(i + 1) + " is negative or NaN");
        p[i] = raw < 1 ? raw : Scalar(1);
    }
    p.back() = 1;
    return p;
}

template <class Scalar>
std::vector<Scalar> return_times(const BirthDeathSpec<Scalar>& spec)
{
    const auto p = positive_clamped(spec);
    const std::size_t n = p.size();
    std::vector<Scalar> H(n);
    H[n - 1] = 1;
    for (std::size_t i = n - 1; i-- > 0;)
        H[i] = (1 + (1 - p[i]) * H[i + 1]) / p[i];
    return H;
}

template <class Scalar>
std::vector<Scalar> return_time_variances(const BirthDeathSpec<Scalar>& spec,
                                          const std::vector<Scalar>& H)
{
    const auto p = positive_clamped(spec);
    const std::size_t n = p.size();
    if (H.size() != n)
        throw InvalidInput("return-time vector does not match the chain length");
    std::vector<Scalar> V(n);
    V[n - 1] = 0;
    for (std::size_t i = n - 1; i-- > 0;) {
        const Scalar q = 1 - p[i];
        const Scalar h = H[i + 1] + 1;
        V[i] = q / p[i] * V[i + 1] + q / (p[i] * p[i]) * h * h;
    }
    return V;
}

template <class Scalar>
Scalar h_closed_form(const BirthDeathSpec<Scalar>& spec, std::size_t k)
{
    const auto p = positive_clamped(spec);
    const std::size_t n = p.size();
    if (k < 1 || k > n)
        throw InvalidInput("index k must lie in 1..n");
    Scalar sum = 0;
    Scalar prod = 1; // Π_{j=k..i-1} r_j
    for (std::size_t i = k; i <= n; ++i) {
        sum += prod / p[i - 1];
        prod *= (1 - p[i - 1]) / p[i - 1];
    }
    return sum - prod;
}

template <class Scalar>
Scalar h1_constant(const Scalar& p, std::size_t n)
{
    if (n < 1)
        throw InvalidInput("n must be >= 1");
    if (!(p > 0) || p > 1)
        throw InvalidInput("constant probability must lie in (0, 1]");
    if (p == 1)
        return Scalar(1);
    if (2 * p == 1)
        return Scalar(2 * static_cast<long>(n) - 1);
    const Scalar r = (1 - p) / p;
    return (1 - 2 * p * power(r, n)) / (2 * p - 1);
}

template <class Scalar>
Scalar fitness_level_time(const Scalar& H1, const std::vector<Scalar>& s)
{
    Scalar total = 0;
    for (const auto& si : s) {
        if (!(si > 0) || si > 1)
            throw InvalidInput("level probabilities must lie in (0, 1]");
        total += (H1 + 1) * (1 / si - 1) + 1;
    }
    return total;
}

Profile parse_profile(std::string_view name)
{
    if (name == "onemax")
        return Profile::onemax;
    if (name == "sort-min")
        return Profile::sort_min;
    if (name == "sort-max")
        return Profile::sort_max;
    throw InvalidInput("unknown profile '" + std::string(name) + "'");
}

template <class Scalar>
BirthDeathSpec<Scalar> standard_profile(Profile profile, std::size_t n, const Exact& c)
{
    if (n < 2)
        throw InvalidInput("standard profiles need n >= 2");
    if (c < 0 || c > 1)
        throw InvalidInput("c must lie in [0, 1]");
    BirthDeathSpec<Scalar> spec;
    if (profile == Profile::onemax) {
        for (std::size_t i = 1; i <= n; ++i)
            spec.p.push_back(from_exact<Scalar>(c + (1 - c) * ratio(i, n)));
        return spec;
    }
    const Exact all_pairs(static_cast<unsigned long>(n * (n - 1) / 2));
    for (std::size_t i = 1; i < n; ++i) {
        const Exact good = profile == Profile::sort_min ? Exact(i) : Exact(i * (i + 1) / 2);
        spec.p.push_back(from_exact<Scalar>(c + (1 - c) * good / all_pairs));
    }
    return spec;
}

double base_by_integration(const std::function<double(double)>& p, double n, double tol)
{
    if (!(n > 0) || !(tol > 0))
        throw InvalidInput("base_by_integration needs n > 0 and tol > 0");
    constexpr int grid = 1024;
    double prev = -1.0;
    for (int k = 0; k <= grid; ++k) {
        const double v = p(n * k / grid);
        if (!(v > 0.0) || v > 1.0)
            throw InvalidInput("profile must map into (0, 1]");
        if (v < prev - 1e-15)
            throw InvalidInput("profile is not non-decreasing");
        prev = v;
    }
    if (p(0.0) >= 0.5)
        return 1.0;

    double kstar = n;
    if (p(n) >= 0.5) {
        double lo = 0.0, hi = n;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (p(mid) >= 0.5 ? hi : lo) = mid;
        }
        kstar = 0.5 * (lo + hi);
    }
    auto integrand = [&](double x) {
        const double v = p(n * x);
        return std::log((1.0 - v) / v);
    };
    return std::exp(adaptive_simpson(integrand, 0.0, kstar / n, tol));
}

double beta_base(double c)
{
    if (!(c > 0.0) || c > 0.5)
        throw InvalidInput("beta_base needs 0 < c <= 1/2");
    return std::pow(2.0, 1.0 / (1.0 - c)) * (1.0 - c) * std::pow(c, c / (1.0 - c));
}

double alpha_base(double c)
{
    if (!(c > 0.0) || c > 0.5)
        throw InvalidInput("alpha_base needs 0 < c <= 1/2");
    const double s = std::sqrt((1.0 - 2.0 * c) / (2.0 * (1.0 - c)));
    return (1.0 + s) / (1.0 - s)
         * std::exp(-2.0 * std::sqrt(c / (1.0 - c)) * std::atan(std::sqrt((1.0 - 2.0 * c) / (2.0 * c))));
}

template std::vector<Exact> clamped(const BirthDeathSpec<Exact>&);
template std::vector<double> clamped(const BirthDeathSpec<double>&);
template std::vector<Exact> return_times(const BirthDeathSpec<Exact>&);
template std::vector<double> return_times(const BirthDeathSpec<double>&);
template std::vector<Exact> return_time_variances(const BirthDeathSpec<Exact>&,
                                                  const std::vector<Exact>&);
template std::vector<double> return_time_variances(const BirthDeathSpec<double>&,
                                                   const std::vector<double>&);
template Exact h_closed_form(const BirthDeathSpec<Exact>&, std::size_t);
template double h_closed_form(const BirthDeathSpec<double>&, std::size_t);
template Exact h1_constant(const Exact&, std::size_t);
template double h1_constant(const double&, std::size_t);
template Exact fitness_level_time(const Exact&, const std::vector<Exact>&);
template double fitness_level_time(const double&, const std::vector<double>&);
template BirthDeathSpec<Exact> standard_profile(Profile, std::size_t, const Exact&);
template BirthDeathSpec<double> standard_profile(Profile, std::size_t, const Exact&);

} // namespace dpso
