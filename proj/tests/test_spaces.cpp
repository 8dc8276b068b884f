#include "dpso/error.hpp"
#include "dpso/spaces.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace dpso;

namespace {

Permutation perm(const char* text) { return parse_permutation(text); }

Permutation from_vector(const oracle::Perm& p) { return Permutation(p); }

} // namespace

TEST_SUITE("spaces") {

TEST_CASE("hamming distance and objective")
{
    Hypercube cube(4);
    CHECK(cube.distance(parse_bitstring("0110"), parse_bitstring("1111")) == 2);
    CHECK(cube.objective(parse_bitstring("1111")) == 0);
    CHECK(cube.objective(parse_bitstring("0111")) == 1);
    CHECK_THROWS_AS(cube.distance(parse_bitstring("011"), parse_bitstring("1111")), InvalidInput);

    Hypercube hidden(4, parse_bitstring("0101"));
    CHECK(hidden.objective(parse_bitstring("0101")) == 0);
    CHECK(hidden.objective(parse_bitstring("1111")) == 2);
}

TEST_CASE("transposition distance examples")
{
    PermutationSpace s(4);
    CHECK(s.distance(perm("2,1,3,4"), perm("1,2,3,4")) == 1);
    CHECK(s.distance(perm("4,3,2,1"), perm("1,2,3,4")) == 2);
    CHECK(s.objective(perm("3,2,4,1")) == 2);
    CHECK(s.objective(perm("1,2,3,4")) == 0);
    CHECK_THROWS_AS(s.distance(perm("2,1,3"), perm("1,2,3,4")), InvalidInput);
}

TEST_CASE("cycle type of the difference permutation")
{
    CHECK(cycle_type_of(perm("1,2,3,4"), perm("1,2,3,4")) == CycleType({1, 1, 1, 1}));
    CHECK(cycle_type_of(perm("2,1,4,3"), perm("1,2,3,4")) == CycleType({2, 2}));
    CHECK(cycle_type_of(perm("2,3,1,4"), perm("1,2,3,4")) == CycleType({3, 1}));
    CHECK(cycle_type_of(perm("3,4,1,2"), perm("1,2,3,4")) == CycleType({2, 2}));
    CHECK_THROWS_AS(cycle_type_of(perm("1,2"), perm("1,2,3")), InvalidInput);

    // distance = n - number of cycles, for every pair at n = 4
    PermutationSpace s(4);
    const auto all = oracle::all_permutations(4);
    for (const auto& a : all)
        for (const auto& b : all) {
            const auto t = cycle_type_of(from_vector(a), from_vector(b));
            CHECK(s.distance(from_vector(a), from_vector(b)) == 4 - t.cycles());
        }
}

TEST_CASE("serialization round trips and rejects malformed text")
{
    CHECK(to_string(parse_bitstring("0110")) == "0110");
    CHECK(to_string(perm("2,1,3,4")) == "2,1,3,4");
    CHECK(to_string(parse_cycle_type("1-3")) == "3-1");
    CHECK(perm("2,1,3,4")[0] == 1);
    CHECK_THROWS_AS(parse_bitstring("0120"), InvalidInput);
    CHECK_THROWS_AS(parse_bitstring(""), InvalidInput);
    CHECK_THROWS_AS(perm("1,1,2"), InvalidInput);
    CHECK_THROWS_AS(perm("0,1"), InvalidInput);
    CHECK_THROWS_AS(perm("1,,2"), InvalidInput);
    CHECK_THROWS_AS(perm("1,4"), InvalidInput);
    CHECK_THROWS_AS(parse_cycle_type("2-0"), InvalidInput);
    CHECK_THROWS_AS(Hypercube(3, parse_bitstring("11")), InvalidInput);
    CHECK_THROWS_AS(PermutationSpace(0), InvalidInput);
}

TEST_CASE("descriptors build the described space")
{
    const auto cube = make_hypercube({SpaceKind::hypercube, 3, std::string("010")});
    CHECK(cube.target() == parse_bitstring("010"));
    const auto sp = make_permutation_space({SpaceKind::permutations, 3, std::nullopt});
    CHECK(sp.target() == Permutation::identity(3));
    CHECK_THROWS_AS(make_hypercube({SpaceKind::hypercube, 3, std::string("01")}), InvalidInput);
    CHECK(visit_space({SpaceKind::permutations, 5, std::nullopt}, [](const auto& s) { return s.diameter(); }) == 4);
}

TEST_CASE("distance agrees with BFS in the transposition graph for all pairs, n <= 5")
{
    for (unsigned n = 1; n <= 5; ++n) {
        PermutationSpace s(n);
        for (const auto& y : oracle::all_permutations(n)) {
            const auto dist = oracle::bfs_distances(y);
            for (const auto& [x, d] : dist)
                REQUIRE(s.distance(from_vector(x), from_vector(y)) == d);
        }
    }
}

TEST_CASE("distance is a metric on random triples, n <= 8")
{
    Rng rng(7);
    for (std::size_t n = 1; n <= 8; ++n) {
        Hypercube cube(n);
        PermutationSpace perms(n);
        for (int t = 0; t < 10000 / 8; ++t) {
            auto check = [&](const auto& space) {
                const auto x = space.sample_uniform(rng), y = space.sample_uniform(rng),
                           z = space.sample_uniform(rng);
                REQUIRE(space.distance(x, y) == space.distance(y, x));
                REQUIRE((space.distance(x, y) == 0) == (x == y));
                REQUIRE(space.distance(x, z) <= space.distance(x, y) + space.distance(y, z));
                REQUIRE(space.distance(x, x) == 0);
            };
            check(cube);
            check(perms);
        }
    }
}

TEST_CASE("uniform permutations have the right cycle-type frequencies")
{
    PermutationSpace s(4);
    Rng rng(11);
    const int N = 100000;
    std::map<std::string, int> counts;
    for (int k = 0; k < N; ++k)
        ++counts[to_string(CycleType::of(s.sample_uniform(rng)))];
    const std::map<std::string, int> sizes = {{"1-1-1-1", 1}, {"2-1-1", 6}, {"2-2", 3}, {"3-1", 8}, {"4", 6}};
    for (const auto& [type, size] : sizes) {
        const double p = size / 24.0;
        const double se = std::sqrt(p * (1 - p) / N);
        CHECK(std::abs(counts[type] / double(N) - p) < 4 * se);
    }
}

TEST_CASE("uniform points are uniform (chi-square)")
{
    Rng rng(3);
    for (unsigned n = 2; n <= 5; ++n) {
        PermutationSpace s(n);
        std::map<std::string, unsigned long> counts;
        for (int k = 0; k < 100000; ++k)
            ++counts[to_string(s.sample_uniform(rng))];
        std::vector<unsigned long> v;
        for (const auto& [k, c] : counts)
            v.push_back(c);
        CHECK(v.size() == std::tgamma(n + 1.0));
        CHECK(oracle::chi_square_uniform_p(v) > 1e-6);
    }
    Hypercube one(1);
    int ones = 0;
    for (int k = 0; k < 10000; ++k)
        ones += one.sample_uniform(rng)[0];
    CHECK(std::abs(ones - 5000) < 4 * 50);
}

TEST_CASE("uniform neighbors: distance one and chi-square uniform, n <= 6")
{
    Rng rng(5);
    for (unsigned n = 2; n <= 6; ++n) {
        PermutationSpace s(n);
        const auto x = s.sample_uniform(rng);
        std::map<std::string, unsigned long> counts;
        for (int k = 0; k < 100000; ++k) {
            const auto y = s.sample_neighbor(x, rng);
            REQUIRE(s.distance(x, y) == 1);
            ++counts[to_string(y)];
        }
        CHECK(counts.size() == n * (n - 1) / 2);
        std::vector<unsigned long> v;
        for (const auto& [k, c] : counts)
            v.push_back(c);
        CHECK(oracle::chi_square_uniform_p(v) > 1e-6);

        Hypercube cube(n);
        const auto b = cube.sample_uniform(rng);
        std::map<std::string, unsigned long> flips;
        for (int k = 0; k < 100000; ++k) {
            const auto y = cube.sample_neighbor(b, rng);
            REQUIRE(cube.distance(b, y) == 1);
            ++flips[to_string(y)];
        }
        CHECK(flips.size() == n);
        std::vector<unsigned long> w;
        for (const auto& [k, c] : flips)
            w.push_back(c);
        CHECK(oracle::chi_square_uniform_p(w) > 1e-6);
    }
    CHECK_THROWS_AS(PermutationSpace(1).sample_neighbor(Permutation::identity(1), rng), InvalidInput);
}

TEST_CASE("improving neighbor counts")
{
    Hypercube cube(4);
    CHECK(cube.count_improving_neighbors(parse_bitstring("0011"), parse_bitstring("1111")) == 2);
    PermutationSpace s(4);
    const auto id = Permutation::identity(4);
    CHECK(s.count_improving_neighbors(perm("2,1,3,4"), id) == 1);
    CHECK(s.count_improving_neighbors(perm("2,3,4,1"), id) == 6);
    CHECK(s.count_improving_neighbors(id, id) == 0);
}

TEST_CASE("improving counts match brute force; min i and max C(i+1,2) per level, n <= 6")
{
    for (unsigned n = 2; n <= 6; ++n) {
        PermutationSpace s(n);
        Rng rng(n);
        const auto anchor = s.sample_uniform(rng);
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> extremes;
        for (const auto& xv : oracle::all_permutations(n)) {
            const Permutation x(xv);
            const std::size_t d = s.distance(x, anchor);
            std::size_t brute = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    Permutation y = x;
                    y.swap_positions(i, j);
                    brute += s.distance(y, anchor) + 1 == d;
                }
            REQUIRE(s.count_improving_neighbors(x, anchor) == brute);
            if (d == 0)
                continue;
            auto [it, fresh] = extremes.emplace(d, std::make_pair(brute, brute));
            it->second.first = std::min(it->second.first, brute);
            it->second.second = std::max(it->second.second, brute);
        }
        for (const auto& [i, mm] : extremes) {
            if (i <= n / 2)
                CHECK(mm.first == i);
            CHECK(mm.second == i * (i + 1) / 2);
        }
    }
}

TEST_CASE("improving neighbor sampling")
{
    Rng rng(9);
    Hypercube cube(4);
    for (int k = 0; k < 100; ++k)
        CHECK(cube.sample_improving_neighbor(parse_bitstring("0111"), parse_bitstring("1111"), rng)
              == parse_bitstring("1111"));
    CHECK_THROWS_AS(cube.sample_improving_neighbor(parse_bitstring("1111"), parse_bitstring("1111"), rng),
                    InvalidInput);

    PermutationSpace s(4);
    const auto id = Permutation::identity(4);
    for (int k = 0; k < 1000; ++k)
        REQUIRE(CycleType::of(s.sample_improving_neighbor(perm("2,1,4,3"), id, rng)) == CycleType({2, 1, 1}));
    CHECK_THROWS_AS(s.sample_improving_neighbor(id, id, rng), InvalidInput);

    const int N = 60000;
    int to31 = 0;
    for (int k = 0; k < N; ++k) {
        const auto t = CycleType::of(s.sample_improving_neighbor(perm("2,3,4,1"), id, rng));
        REQUIRE((t == CycleType({3, 1}) || t == CycleType({2, 2})));
        to31 += t == CycleType({3, 1});
    }
    const double se = std::sqrt((2.0 / 3) * (1.0 / 3) / N);
    CHECK(std::abs(to31 / double(N) - 2.0 / 3) < 4 * se);
}

TEST_CASE("improving neighbors always decrease the distance by one and are uniform")
{
    Rng rng(21);
    for (unsigned n = 2; n <= 8; ++n) {
        PermutationSpace s(n);
        Hypercube cube(n);
        for (int k = 0; k < 2000; ++k) {
            const auto a = s.sample_uniform(rng), x = s.sample_uniform(rng);
            if (x != a)
                REQUIRE(s.distance(s.sample_improving_neighbor(x, a, rng), a) + 1 == s.distance(x, a));
            const auto b = cube.sample_uniform(rng), y = cube.sample_uniform(rng);
            if (y != b)
                REQUIRE(cube.distance(cube.sample_improving_neighbor(y, b, rng), b) + 1 == cube.distance(y, b));
        }
    }
    // uniform over the improving set of a fixed point with mixed cycle lengths
    PermutationSpace s(6);
    const auto id = Permutation::identity(6);
    const auto x = perm("2,3,1,5,4,6"); // cycles (1 2 3)(4 5)(6): 3 + 1 improving moves
    std::map<std::string, unsigned long> counts;
    for (int k = 0; k < 100000; ++k)
        ++counts[to_string(s.sample_improving_neighbor(x, id, rng))];
    CHECK(counts.size() == 4);
    std::vector<unsigned long> v;
    for (const auto& [k, c] : counts)
        v.push_back(c);
    CHECK(oracle::chi_square_uniform_p(v) > 1e-6);
}

TEST_CASE("points at a given distance are uniform over that sphere")
{
    Rng rng(17);
    PermutationSpace s(4);
    const auto anchor = perm("3,1,4,2");
    std::map<std::string, unsigned long> counts;
    for (int k = 0; k < 100000; ++k) {
        const auto x = s.sample_at_distance(anchor, 2, rng);
        REQUIRE(s.distance(x, anchor) == 2);
        ++counts[to_string(x)];
    }
    CHECK(counts.size() == 11);
    std::vector<unsigned long> v;
    for (const auto& [k, c] : counts)
        v.push_back(c);
    CHECK(oracle::chi_square_uniform_p(v) > 1e-6);

    for (std::size_t d = 0; d <= 9; ++d)
        for (int k = 0; k < 50; ++k)
            REQUIRE(PermutationSpace(10).distance(PermutationSpace(10).sample_at_distance(Permutation::identity(10), d, rng),
                                                  Permutation::identity(10))
                    == d);
    CHECK_THROWS_AS(s.sample_at_distance(anchor, 4, rng), InvalidInput);

    Hypercube cube(5);
    std::map<std::string, unsigned long> bits;
    for (int k = 0; k < 50000; ++k) {
        const auto x = cube.sample_at_distance(cube.target(), 2, rng);
        REQUIRE(cube.objective(x) == 2);
        ++bits[to_string(x)];
    }
    CHECK(bits.size() == 10);
    std::vector<unsigned long> w;
    for (const auto& [k, c] : bits)
        w.push_back(c);
    CHECK(oracle::chi_square_uniform_p(w) > 1e-6);
    CHECK_THROWS_AS(cube.sample_at_distance(cube.target(), 6, rng), InvalidInput);
}

} // TEST_SUITE
