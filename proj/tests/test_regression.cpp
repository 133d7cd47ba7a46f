// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <doctest.h>

#include "hillpr/engine.hpp"
#include "hillpr/error.hpp"
#include "hillpr/regression.hpp"
#include "hillpr/rng.hpp"

using namespace hillpr;

namespace
{
struct Dataset
{
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
};

Dataset make_data(std::uint64_t seed, int n, double b0, double b1)
{
    RngStream s(seed, 5000);
    Dataset d{Eigen::VectorXd(n), Eigen::MatrixXd(n, 2)};
    for (int i = 0; i < n; ++i)
    {
        d.x(i, 0) = 1;
        d.x(i, 1) = s.next_standard_normal();
        d.y[i] = b0 + b1 * d.x(i, 1) + s.next_standard_normal();
    }
    return d;
}

//! Two-parameter least squares from centered sums in long double.
std::array<long double, 2> simple_ols(Dataset const& d)
{
    long double mx = 0, my = 0;
    auto const n = d.y.size();
    for (int i = 0; i < n; ++i)
    {
        mx += d.x(i, 1);
        my += d.y[i];
    }
    mx /= n;
    my /= n;
    long double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i)
    {
        sxx += (d.x(i, 1) - mx) * (d.x(i, 1) - mx);
        sxy += (d.x(i, 1) - mx) * (d.y[i] - my);
    }
    long double const slope = sxy / sxx;
    return {my - slope * mx, slope};
}
}  // namespace

TEST_CASE("ordinary least squares")
{
    auto const d = make_data(1, 50, 2, 0);
    auto const fit = fit_ols(d.x, d.y);
    auto const ref = simple_ols(d);
    CHECK(std::abs(fit.beta[0] - double(ref[0])) <= 1e-12);
    CHECK(std::abs(fit.beta[1] - double(ref[1])) <= 1e-12);
    double const rss = (d.y - d.x * fit.beta).squaredNorm();
    CHECK(fit.sigma == doctest::Approx(std::sqrt(rss / 48)).epsilon(1e-13));
    CHECK(((d.x.transpose() * d.x) * fit.gram_inverse
           - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    Dataset exact = d;
    exact.y = 1.0 + 3.0 * exact.x.col(1).array();
    CHECK_THROWS_AS(fit_ols(exact.x, exact.y), DegeneracyError);
    Eigen::MatrixXd dup(50, 2);
    dup.col(0) = d.x.col(1);
    dup.col(1) = 2 * d.x.col(1);
    CHECK_THROWS_AS(fit_ols(dup, d.y), DegeneracyError);
    CHECK_THROWS_AS(fit_ols(d.x.topRows(2), d.y.head(2)), InvalidArgument);
}

TEST_CASE("recursive least squares tracks the full fit")
{
    auto const d = make_data(2, 30, 1, -1);
    RecursiveOls ols(fit_ols(d.x, d.y));
    RngStream s(2, 0);
    Eigen::MatrixXd x = d.x;
    Eigen::VectorXd y = d.y;
    for (int step = 0; step < 400; ++step)
    {
        Eigen::VectorXd row(2);
        row << 1, s.next_standard_normal();
        double const resp = 1 - row[1] + s.next_standard_normal();
        ols.add(row, resp);
        x.conservativeResize(x.rows() + 1, Eigen::NoChange);
        x.row(x.rows() - 1) = row.transpose();
        y.conservativeResize(y.size() + 1);
        y[y.size() - 1] = resp;
    }
    auto const full = fit_ols(x, y);
    CHECK((ols.beta() - full.beta).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(ols.rss() == doctest::Approx(full.rss).epsilon(1e-10));
    CHECK(ols.sigma() == doctest::Approx(full.sigma).epsilon(1e-10));
    CHECK(ols.count() == 430);
}

TEST_CASE("regression runs")
{
    auto const d = make_data(3, 50, 2, 0);
    auto const fit = fit_ols(d.x, d.y);
    RunConfig c;
    c.scheme = Scheme::regression;
    c.statistic = StatisticSpec::ols_coefficients();
    c.seed = 3;
    c.runs = 4;

    for (auto mode : {ResidualUpdate::recompute, ResidualUpdate::append})
    {
        c.residual_update = mode;
        c.horizon = 50;
        auto const zero = run_regression(c, d.y, d.x);
        CHECK(zero.names == std::vector<std::string>{"beta_1", "beta_2"});
        for (auto const& row : zero.rows)
        {
            CHECK(row[0] == fit.beta[0]);
            CHECK(row[1] == fit.beta[1]);
        }

        c.horizon = 1600;
        auto const run = run_regression(c, d.y, d.x);
        CHECK(run.diagnostics.refits == 4 * 3);
        CHECK(run.diagnostics.max_refit_delta <= 1e-8);
    }

    c.residual_update = ResidualUpdate::recompute;
    c.horizon = 1000;
    c.runs = 100;
    auto const post = run_regression(c, d.y, d.x);
    for (int k = 0; k < 2; ++k)
    {
        auto const col = post.column(static_cast<std::size_t>(k));
        double mean = 0;
        for (double v : col)
            mean += v / col.size();
        CHECK(std::abs(mean - fit.beta[k]) < 0.15);
    }

    c.statistic = StatisticSpec::mean();
    CHECK_THROWS_AS(run_regression(c, d.y, d.x), InvalidArgument);
}

TEST_CASE("residual update names")
{
    CHECK(parse_residual_update("append") == ResidualUpdate::append);
    CHECK(to_string(ResidualUpdate::recompute) == "recompute");
    CHECK_THROWS_AS(parse_residual_update("refit"), InvalidArgument);
}
