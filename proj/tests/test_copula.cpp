// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <doctest.h>

#include "hillpr/copula.hpp"
#include "hillpr/error.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/transforms.hpp"

using namespace hillpr;

namespace
{
std::vector<double> normals(RngStream& s, std::size_t n)
{
    std::vector<double> v(n);
    for (auto& x : v)
        x = s.next_standard_normal();
    return v;
}

double correlation_of(std::vector<std::pair<double, double>> const& xy)
{
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (auto [x, y] : xy)
    {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    long double const n = xy.size();
    long double const cov = sxy / n - sx / n * sy / n;
    return double(cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n)));
}
}  // namespace

TEST_CASE("variant names")
{
    CHECK(parse_variant("A") == CopulaVariant::A);
    CHECK(parse_variant("B") == CopulaVariant::B);
    CHECK(to_char(CopulaVariant::A) == 'A');
    CHECK_THROWS(parse_variant("C"));
}

TEST_CASE("initialization")
{
    std::vector<double> x{-1, 0, 1}, y{1, 0, -1};
    BivariateCopula c(x, y, CopulaVariant::B);
    CHECK(c.s2_1() == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(c.s2_2() == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(c.cross() == doctest::Approx(-2.0 / 3).epsilon(1e-15));
    CHECK(c.correlation() == -1.0);

    CHECK(BivariateCopula(x, x, CopulaVariant::A).correlation() == 1.0);
    std::vector<double> z{0, 0, 0};
    CHECK_THROWS_AS(BivariateCopula(x, z, CopulaVariant::B).correlation(), DegeneracyError);

    CHECK(BivariateCopula(CopulaVariant::B, 1, 4, 0, 3).correlation() == 0.0);
    CHECK(BivariateCopula(CopulaVariant::B, 1, 4, 2, 3).correlation() == 1.0);
}

TEST_CASE("single update arithmetic")
{
    for (auto v : {CopulaVariant::B, CopulaVariant::A})
    {
        BivariateCopula c(v, 1, 1, 0, 4);
        c.update(1, 1);
        CHECK(c.s2_1() == doctest::Approx(1).epsilon(1e-15));
        CHECK(c.s2_2() == doctest::Approx(1).epsilon(1e-15));
        CHECK(c.cross() == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(c.correlation() == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(c.count() == 5);
    }
}

TEST_CASE("model B recursion equals pooled averages")
{
    RngStream s(21, 0);
    auto const x0 = normals(s, 40), y0 = normals(s, 40);
    BivariateCopula c(x0, y0, CopulaVariant::B);
    long double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x0.size(); ++i)
    {
        sxx += x0[i] * x0[i];
        syy += y0[i] * y0[i];
        sxy += x0[i] * y0[i];
    }
    std::size_t m = x0.size();
    for (int step = 0; step < 20000; ++step)
    {
        double const x = s.next_standard_normal(), y = s.next_standard_normal();
        c.update(x, y);
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++m;
    }
    CHECK(std::abs(c.s2_1() - double(sxx / m)) <= 1e-12 * double(sxx / m));
    CHECK(std::abs(c.s2_2() - double(syy / m)) <= 1e-12 * double(syy / m));
    double const scale = std::sqrt(double(sxx / m * syy / m));
    CHECK(std::abs(c.cross() - double(sxy / m)) <= 1e-12 * scale);
}

TEST_CASE("pair sampling")
{
    RngStream s(22, 0);
    for (double rho : {0.0, 0.6, -0.6})
    {
        BivariateCopula c(CopulaVariant::B, 1, 1, rho, 10);
        std::vector<std::pair<double, double>> draws(100000);
        for (auto& d : draws)
            d = c.sample_pair(s);
        CHECK(std::abs(correlation_of(draws) - rho) < 0.01);
    }
    BivariateCopula one(CopulaVariant::B, 1, 1, 1, 10);
    for (int i = 0; i < 100; ++i)
    {
        auto const [x, y] = one.sample_pair(s);
        CHECK(x == y);
    }
}

TEST_CASE("correlation stays in [-1, 1] under both recursions")
{
    RngStream s(23, 0);
    for (auto v : {CopulaVariant::A, CopulaVariant::B})
    {
        auto const x0 = normals(s, 5);
        auto y0 = x0;
        y0[0] += 1e-3;  // nearly collinear start
        BivariateCopula c(x0, y0, v);
        for (int step = 0; step < 50000; ++step)
        {
            double const x = 3 * s.next_standard_normal();
            double const y = step % 3 ? x : -x;
            c.update(x, y);
            double const r = c.correlation();
            REQUIRE(std::abs(r) <= 1.0);
            REQUIRE(c.cross() * c.cross() <= c.s2_1() * c.s2_2() * (1 + 1e-12));
        }
    }
}

TEST_CASE("multivariate initialization")
{
    RngStream s(24, 0);
    Eigen::MatrixXd scores(4, 2);
    scores << -1, 0, 0, -1, 1, 0, 0, 1;
    MultiCopula orth(scores);
    auto const r = orth.correlation_matrix();
    CHECK(r.isIdentity(0));
    CHECK(orth.moments()(0, 1) == 0.0);

    Eigen::MatrixXd sing(6, 3);
    for (int i = 0; i < 6; ++i)
    {
        sing(i, 0) = s.next_standard_normal();
        sing(i, 1) = s.next_standard_normal();
        sing(i, 2) = sing(i, 0);
    }
    CHECK_THROWS_AS(MultiCopula{sing}, DegeneracyError);
    CHECK_THROWS_AS(MultiCopula{Eigen::MatrixXd::Zero(5, 1)}, InvalidArgument);
    CHECK_THROWS_AS(MultiCopula{Eigen::MatrixXd::Ones(2, 3)}, InvalidArgument);
}

TEST_CASE("d = 2 reproduces the bivariate model A draw for draw")
{
    RngStream s(25, 0);
    auto const x0 = normals(s, 30), y0 = normals(s, 30);
    Eigen::MatrixXd scores(30, 2);
    for (int i = 0; i < 30; ++i)
    {
        scores(i, 0) = x0[i];
        scores(i, 1) = y0[i];
    }
    MultiCopula multi(scores);
    BivariateCopula biv(x0, y0, CopulaVariant::A);
    CHECK(multi.moments()(0, 0) == biv.s2_1());
    CHECK(multi.moments()(1, 1) == biv.s2_2());
    CHECK(multi.moments()(0, 1) == biv.cross());

    RngStream a(26, 1), b(26, 1);
    for (int step = 0; step < 2000; ++step)
    {
        auto const v = multi.sample_vector(a);
        auto const [x, y] = biv.sample_pair(b);
        REQUIRE(v[0] == x);
        REQUIRE(v[1] == y);
        multi.update(v);
        biv.update(x, y);
        REQUIRE(multi.correlation_matrix()(0, 1) == biv.correlation());
    }
}

TEST_CASE("multivariate recursion properties")
{
    RngStream s(27, 0);
    int const d = 4;
    Eigen::MatrixXd scores(12, d);
    for (int i = 0; i < 12; ++i)
        for (int k = 0; k < d; ++k)
            scores(i, k) = s.next_standard_normal();
    MultiCopula c(scores);

    // Zero increment shrinks S uniformly and keeps R
    auto const r0 = c.correlation_matrix();
    auto const s0 = c.moments();
    auto const m = double(c.count());
    c.update(std::vector<double>(d, 0.0));
    CHECK((c.moments() - s0 * (m / (m + 1))).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((c.correlation_matrix() - r0).cwiseAbs().maxCoeff() <= 1e-14);

    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < 100; ++i)
    {
        Eigen::VectorXd a(d);
        for (int k = 0; k < d; ++k)
            a[k] = s.next_standard_normal();
        probes.push_back(a);
    }
    for (int step = 0; step < 1000; ++step)
    {
        c.update(c.sample_vector(s));
        auto const r = c.correlation_matrix();
        REQUIRE(r == r.transpose());
        REQUIRE(c.moments() == c.moments().transpose());
        for (int k = 0; k < d; ++k)
            REQUIRE(std::abs(r(k, k) - 1) <= 1e-14);
        REQUIRE(r.cwiseAbs().maxCoeff() <= 1.0);
        for (auto const& a : probes)
            REQUIRE(a.dot(r * a) > 0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
        REQUIRE(eig.eigenvalues().minCoeff() > 0);
    }
    CHECK(c.jitter_events() == 0);
}

TEST_CASE("cholesky helper")
{
    Eigen::MatrixXd a(3, 3), l;
    a << 4, 2, 0, 2, 5, 1, 0, 1, 3;
    REQUIRE(cholesky_lower(a, l));
    CHECK((l * l.transpose() - a).cwiseAbs().maxCoeff() <= 1e-14);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_FALSE(cholesky_lower(bad, l));
}
