#include "dpso/chain.hpp"
#include "dpso/error.hpp"
#include "dpso/experiments.hpp"
#include "dpso/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace dpso;

namespace {

BirthDeathSpec<Exact> exact_chain(std::initializer_list<const char*> ps)
{
    BirthDeathSpec<Exact> s;
    for (auto p : ps)
        s.p.push_back(parse_exact(p));
    return s;
}

/// Random rational chain with entries in (0, 1], occasionally above 1 to exercise clamping.
BirthDeathSpec<Exact> random_chain(Rng& rng, std::size_t n)
{
    BirthDeathSpec<Exact> s;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned long den = 1 + rng.below(12);
        const unsigned long num = 1 + rng.below(den + (rng.below(8) == 0 ? 3 : 0));
        Exact q(num, den);
        q.canonicalize();
        s.p.push_back(q);
    }
    return s;
}

/// H_1 for p_i = 1/2 + i/(2 A) with the clamped view.
double linear_h1(std::size_t n, double A)
{
    BirthDeathSpec<double> s;
    for (std::size_t i = 1; i <= n; ++i)
        s.p.push_back(0.5 + i / (2.0 * A));
    return return_times(s).front();
}

} // namespace

TEST_SUITE("chain") {

TEST_CASE("return times: certain moves, constant one half, linear profile")
{
    const auto ones = return_times(exact_chain({"1", "1", "1", "1"}));
    for (const auto& h : ones)
        CHECK(h == 1);
    const auto V = return_time_variances(exact_chain({"1", "1", "1", "1"}), ones);
    for (const auto& v : V)
        CHECK(v == 0);

    BirthDeathSpec<Exact> half;
    half.p.assign(7, Exact(1, 2));
    CHECK(return_times(half).front() == 13);

    // p_i = 1/2 + i/4 for n = 2: H_2 = 1, H_1 = 4/3 + (1/4)/(3/4) = 5/3
    CHECK(return_times(exact_chain({"3/4", "1"})).front() == Exact(5, 3));
}

TEST_CASE("recurrence values by hand")
{
    // p = (1/3, 1/3, 1): H_3 = 1, H_2 = 3 + 2 = 5, H_1 = 3 + 2*5 = 13
    const auto H = return_times(exact_chain({"1/3", "1/3", "1"}));
    CHECK(H[0] == 13);
    CHECK(H[1] == 5);
    CHECK(H[2] == 1);
}

TEST_CASE("variance recursion")
{
    const auto spec = exact_chain({"1/2", "1"});
    CHECK(return_time_variances(spec, return_times(spec)).front() == 8);
    CHECK_THROWS_AS(return_time_variances(spec, std::vector<Exact>{1}), InvalidInput);
}

TEST_CASE("variance matches simulation within 5% at 10^6 samples for three chains")
{
    BirthDeathSpec<double> a0;
    a0.p.assign(3, 0.5);
    const auto& a = a0;
    const auto b = standard_profile<double>(Profile::onemax, 8, Exact(1, 2));
    const auto c = standard_profile<double>(Profile::sort_max, 5, Exact(3, 10));
    std::uint64_t seed = 100;
    for (const auto* spec : {&a, &b, &c}) {
        const auto H = return_times(*spec);
        const double V1 = return_time_variances(*spec, H).front();
        const auto stats = estimate_chain_return_time(*spec, 1'000'000, seed++);
        CHECK(stats.censored == 0);
        CHECK(std::abs(stats.variance / V1 - 1.0) < 0.05);
        CHECK(std::abs(stats.mean - H.front()) < 4 * stats.standard_error);
    }
}

TEST_CASE("clamping and undefined chains")
{
    // entries above 1 act as 1; the last entry is always treated as 1
    CHECK(return_times(exact_chain({"5/2", "0"})).front() == 1);
    CHECK(clamped(exact_chain({"3/2", "1/4", "0"})) == std::vector<Exact>{1, Exact(1, 4), 1});
    CHECK_THROWS_AS(return_times(exact_chain({"0", "1"})), UndefinedReturnTime);
    CHECK_THROWS_AS(return_times(exact_chain({"-1/2", "1"})), InvalidInput);
    CHECK_THROWS_AS(return_times(BirthDeathSpec<Exact>{}), InvalidInput);
}

TEST_CASE("constant-probability closed form")
{
    CHECK(h1_constant(Exact(1), 5) == 1);
    CHECK(h1_constant(1.0, 5) == 1.0);
    CHECK(h1_constant(Exact(1, 2), 100) == 199);
    CHECK(h1_constant(Exact(1, 3), 3) == return_times(exact_chain({"1/3", "1/3", "1"})).front());
    CHECK_THROWS_AS(h1_constant(Exact(0), 3), InvalidInput);
    CHECK_THROWS_AS(h1_constant(Exact(3, 2), 3), InvalidInput);
    for (std::size_t n = 1; n <= 30; ++n)
        for (const char* p : {"1/5", "2/5", "3/5", "9/10"}) {
            BirthDeathSpec<Exact> s;
            s.p.assign(n, parse_exact(p));
            REQUIRE(h1_constant(parse_exact(p), n) == return_times(s).front());
        }
    CHECK(h1_constant(0.3, 20) == doctest::Approx(return_times(BirthDeathSpec<double>{std::vector<double>(20, 0.3)}).front()).epsilon(1e-12));
}

TEST_CASE("closed form of H_k")
{
    CHECK(h_closed_form(exact_chain({"1/7", "2/9", "1/2"}), 3) == 1);
    // OneMax random walk n = 4: H_2 = (C(4,2) + C(4,3) + C(4,4)) / C(3,1) = 11/3
    const auto walk = standard_profile<Exact>(Profile::onemax, 4, Exact(0));
    CHECK(h_closed_form(walk, 2) == Exact(11, 3));
    CHECK_THROWS_AS(h_closed_form(walk, 0), InvalidInput);
    CHECK_THROWS_AS(h_closed_form(walk, 5), InvalidInput);
}

TEST_CASE("closed form equals the recurrence exactly on 1000 random chains")
{
    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        const auto spec = random_chain(rng, 1 + rng.below(12));
        const auto H = return_times(spec);
        for (std::size_t k = 1; k <= spec.n(); ++k)
            REQUIRE(h_closed_form(spec, k) == H[k - 1]);
    }
}

TEST_CASE("raising one probability never raises H_1")
{
    Rng rng(77);
    for (int t = 0; t < 300; ++t) {
        auto spec = random_chain(rng, 2 + rng.below(10));
        const Exact before = return_times(spec).front();
        const std::size_t i = rng.below(spec.n());
        spec.p[i] += ratio(1 + rng.below(4), 5);
        REQUIRE(return_times(spec).front() <= before);
    }
}

TEST_CASE("linear profile identity H_1 = 4^n / C(2n, n) - 1, n <= 20")
{
    for (unsigned long n = 1; n <= 20; ++n) {
        BirthDeathSpec<Exact> s;
        for (unsigned long i = 1; i <= n; ++i)
            s.p.push_back(Exact(1, 2) + ratio(i, 2 * n));
        Exact four_n(pow(Exact(4), n));
        REQUIRE(return_times(s).front() == four_n / Exact(binomial(2 * n, n)) - 1);
    }
}

TEST_CASE("growth of H_1 for p_i = 1/2 + i/(2A(n))")
{
    // A(n) = n: sqrt(A) < n, square-root growth
    for (std::size_t n : {64, 128, 256}) {
        const double r = linear_h1(2 * n, 2.0 * n) / linear_h1(n, double(n));
        CHECK(r >= 1.2);
        CHECK(r <= 1.7);
    }
    // A(n) = n^2: min(sqrt(A), n) = n, linear growth
    for (std::size_t n : {64, 128, 256}) {
        const double r = linear_h1(2 * n, 4.0 * n * n) / linear_h1(n, double(n) * n);
        CHECK(r >= 1.8);
        CHECK(r <= 2.2);
    }
}

TEST_CASE("growth of H_1 for p_i = (1 + A(i)/A(n))/2 with A(m) = C(m,2)")
{
    auto h1 = [](std::size_t n) {
        BirthDeathSpec<double> s;
        const double An = n * (n - 1) / 2.0;
        for (std::size_t i = 1; i <= n; ++i)
            s.p.push_back(0.5 * (1.0 + i * (i - 1) / 2.0 / An));
        return return_times(s).front();
    };
    for (std::size_t n : {128, 256, 512}) {
        const double r = h1(2 * n) / h1(n);
        CHECK(std::abs(r - std::pow(2.0, 2.0 / 3.0)) < 0.1);
    }
}

TEST_CASE("exponential bases")
{
    CHECK(beta_base(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_base(0.25) == doctest::Approx(1.190551).epsilon(1e-6));
    CHECK(beta_base(1e-9) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(alpha_base(0.5) == 1.0);
    CHECK(alpha_base(0.5 - 1e-9) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(alpha_base(1e-12) == doctest::Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-4));
    CHECK(alpha_base(0.1) > beta_base(0.1));
    CHECK(alpha_base(0.1) < 9.0);
    CHECK_THROWS_AS(beta_base(0.0), InvalidInput);
    CHECK_THROWS_AS(beta_base(0.6), InvalidInput);
    CHECK_THROWS_AS(alpha_base(-0.1), InvalidInput);

    double prev_beta = 2.0;
    for (int k = 1; k < 100; ++k) {
        const double c = k / 200.0;
        const double b = beta_base(c), a = alpha_base(c);
        REQUIRE(1.0 < b);
        REQUIRE(b < a);
        REQUIRE(a < (1 - c) / c);
        REQUIRE(a < 3 + 2 * std::sqrt(2.0));
        REQUIRE(b < prev_beta);
        prev_beta = b;
    }
}

TEST_CASE("base by integration")
{
    CHECK(base_by_integration([](double) { return 0.75; }, 10.0) == 1.0);
    const double c = 0.25;
    CHECK(base_by_integration([&](double x) { return c + (1 - c) * x / 50.0; }, 50.0)
          == doctest::Approx(beta_base(c)).epsilon(1e-6));
    CHECK(base_by_integration([&](double x) { return c + (1 - c) * x * x / 2500.0; }, 50.0)
          == doctest::Approx(alpha_base(c)).epsilon(1e-6));
    // never reaching 1/2: integrate over the whole range
    CHECK(base_by_integration([](double) { return 0.25; }, 10.0) == doctest::Approx(3.0).epsilon(1e-9));
    for (int k = 1; k <= 9; ++k) {
        const double ck = 0.05 * k;
        for (double n : {1000.0, 5000.0})
            REQUIRE(std::abs(base_by_integration([&](double x) { return ck + (1 - ck) * x / n; }, n)
                             - beta_base(ck))
                    < 1e-6);
    }
    CHECK_THROWS_AS(base_by_integration([](double x) { return 0.4 - x / 100.0; }, 10.0), InvalidInput);
    CHECK_THROWS_AS(base_by_integration([](double x) { return x / 10.0; }, 10.0), InvalidInput);
    CHECK_THROWS_AS(base_by_integration([](double) { return 0.3; }, 10.0, 0.0), InvalidInput);
}

TEST_CASE("fitness level sums")
{
    CHECK(fitness_level_time(Exact(7), std::vector<Exact>(5, Exact(1))) == 5);
    for (unsigned long n = 1; n <= 15; ++n) {
        std::vector<Exact> s;
        Exact harmonic = 0;
        for (unsigned long i = 1; i <= n; ++i) {
            s.emplace_back(i, n);
            s.back().canonicalize();
            harmonic += Exact(1, i);
        }
        REQUIRE(fitness_level_time(Exact(0), s) == Exact(n) * harmonic);
    }
    // sorting, n = 4, s_i = i/6, H1 = 23: 24*(6-1) + 1 + 24*(3-1) + 1 + 24*(2-1) + 1
    std::vector<Exact> s = {Exact(1, 6), Exact(1, 3), Exact(1, 2)};
    CHECK(fitness_level_time(Exact(23), s) == 24 * 5 + 24 * 2 + 24 * 1 + 3);
    CHECK_THROWS_AS(fitness_level_time(Exact(1), std::vector<Exact>{Exact(0)}), InvalidInput);
}

TEST_CASE("standard profiles")
{
    const auto om = standard_profile<Exact>(Profile::onemax, 4, Exact(0));
    CHECK(om.p == std::vector<Exact>{Exact(1, 4), Exact(1, 2), Exact(3, 4), 1});
    const auto smin = standard_profile<Exact>(Profile::sort_min, 4, Exact(1, 2));
    CHECK(smin.n() == 3);
    CHECK(smin.p[0] == Exact(7, 12));
    const auto smax = standard_profile<Exact>(Profile::sort_max, 4, Exact(0));
    CHECK(smax.p[0] == Exact(1, 6));
    CHECK(smax.p[2] == 1);
    CHECK(parse_profile("sort-max") == Profile::sort_max);
    CHECK_THROWS_AS(parse_profile("zigzag"), InvalidInput);
    CHECK_THROWS_AS(standard_profile<double>(Profile::onemax, 1, Exact(0)), InvalidInput);
    CHECK_THROWS_AS(standard_profile<double>(Profile::onemax, 4, Exact(2)), InvalidInput);
}

} // TEST_SUITE
