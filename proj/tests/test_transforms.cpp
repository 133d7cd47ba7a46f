// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "hillpr/error.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/transforms.hpp"
#include "oracles.hpp"

using namespace hillpr;

TEST_CASE("transform specs")
{
    CHECK(TransformSpec::parse("identity") == TransformSpec::identity());
    CHECK(TransformSpec::parse("logit") == TransformSpec::logit());
    CHECK(TransformSpec::parse("affine:0:10") == TransformSpec::affine(0, 10));
    CHECK(TransformSpec::parse(TransformSpec::affine(-2.5, 7).to_string())
          == TransformSpec::affine(-2.5, 7));
    CHECK_THROWS(TransformSpec::parse("affine:3:1"));
    CHECK_THROWS(TransformSpec::parse("log"));
}

TEST_CASE("unit maps")
{
    CHECK(to_unit(TransformSpec::logit(), 0.0) == 0.5);
    CHECK(to_unit(TransformSpec::affine(0, 10), 2.5) == 0.25);
    CHECK(to_unit(TransformSpec::identity(), 0.3) == 0.3);
    CHECK_THROWS_AS(to_unit(TransformSpec::identity(), 1.5), DomainError);
    CHECK_THROWS_AS(to_unit(TransformSpec::affine(0, 10), 11), DomainError);

    std::size_t clamps = 0;
    double const low = to_unit(TransformSpec::identity(), 0.0, &clamps);
    double const high = to_unit(TransformSpec::affine(0, 10), 10.0, &clamps);
    double const sat = to_unit(TransformSpec::logit(), 1000.0, &clamps);
    CHECK(low > 0);
    CHECK(high < 1);
    CHECK(sat < 1);
    CHECK(clamps == 3);

    RngStream s(9, 0);
    for (int i = 0; i < 1000; ++i)
    {
        double const x = 20 * (s.next_uniform() - 0.5);
        double const back = from_unit(TransformSpec::logit(), to_unit(TransformSpec::logit(), x));
        CHECK(std::abs(back - x) <= 1e-10 * std::max(1.0, std::abs(x)));
        double const y = 3 + 4 * s.next_open_uniform();
        auto const aff = TransformSpec::affine(3, 7);
        CHECK(std::abs(from_unit(aff, to_unit(aff, y)) - y) <= 1e-10 * std::abs(y));
    }
}

TEST_CASE("automatic choice")
{
    CHECK(choose_transform(std::vector<double>{0.2, 0.9}) == TransformSpec::identity());
    CHECK(choose_transform(std::vector<double>{0.2, 1.0}) == TransformSpec::logit());
    CHECK(choose_transform(std::vector<double>{-3, 2}) == TransformSpec::logit());
}

TEST_CASE("ranks and gaussian scores")
{
    std::vector<double> data{5.0, 1.0, 9.0};
    CHECK(ranks(data) == std::vector<std::size_t>{2, 1, 3});
    auto const z = gaussian_scores(data);
    double const q = static_cast<double>(oracle::quantile(0.75));
    CHECK(z[0] == 0.0);
    CHECK(std::abs(z[1] + 0.67449) < 1e-4);
    CHECK(std::abs(z[2] - 0.67449) < 1e-4);
    CHECK(std::abs(z[2] - q) < 1e-12);
    CHECK_THROWS_AS(ranks(std::vector<double>{1, 2, 1}), TieError);

    RngStream s(4, 4);
    for (std::size_t n : {2u, 7u, 50u, 101u})
    {
        std::vector<double> v(n);
        for (auto& x : v)
            x = s.next_standard_normal();
        auto const g = gaussian_scores(v);
        auto const r = ranks(v);
        std::vector<double> by_rank(n);
        for (std::size_t i = 0; i < n; ++i)
            by_rank[r[i] - 1] = g[i];
        for (std::size_t k = 0; k < n; ++k)
            CHECK(by_rank[k] == -by_rank[n - 1 - k]);
        CHECK(std::is_sorted(by_rank.begin(), by_rank.end()));
        CHECK(std::adjacent_find(by_rank.begin(), by_rank.end()) == by_rank.end());
    }
}
