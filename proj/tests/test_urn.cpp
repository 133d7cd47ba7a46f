// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <doctest.h>

#include "hillpr/error.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/urn.hpp"

using namespace hillpr;

TEST_CASE("urn basics")
{
    UrnState empty;
    RngStream s(1, 0);
    CHECK_THROWS_AS(empty.sample_atom(s), StateError);

    UrnState single(std::vector<double>{3.5});
    for (int i = 0; i < 100; ++i)
        CHECK(single.sample_next(s) == 3.5);

    UrnState pair(std::vector<double>{1.0, 2.0});
    CHECK(pair.total() == 2);
    CHECK(pair.atom_count() == 2);
    int a = 0;
    int const n = 100000;
    for (int i = 0; i < n; ++i)
        a += pair.sample_next(s) == 1.0;
    CHECK(std::abs(double(a) / n - 0.5) <= 3 * std::sqrt(0.25 / n));

    pair.insert(2.0);
    CHECK(pair.total() == 3);
    CHECK(pair.count(1) == 2);
    pair.insert(7.0);
    CHECK(pair.atom_count() == 3);
}

TEST_CASE("long-run urn weights are flat Dirichlet")
{
    std::size_t const n = 5;
    std::vector<double> atoms{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> mean(n, 0);
    int const runs = 1000;
    for (int r = 0; r < runs; ++r)
    {
        UrnState urn(atoms);
        RngStream s(2, static_cast<std::uint64_t>(r));
        for (int step = 0; step < 10000; ++step)
            urn.insert_atom(urn.sample_atom(s));
        for (std::size_t i = 0; i < n; ++i)
            mean[i] += double(urn.count(i)) / double(urn.total()) / runs;
    }
    // Dirichlet(1,...,1) component variance (n-1) / (n^2 (n+1))
    double const sd = std::sqrt(double(n - 1) / double(n * n * (n + 1)));
    for (double m : mean)
        CHECK(std::abs(m - 1.0 / n) <= 3 * sd / std::sqrt(double(runs)));
}
