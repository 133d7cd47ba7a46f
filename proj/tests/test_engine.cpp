// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <doctest.h>

#include "hillpr/engine.hpp"
#include "hillpr/error.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/statistics.hpp"
#include "oracles.hpp"

using namespace hillpr;

namespace
{
std::vector<double> normal_data(std::uint64_t seed, std::size_t n)
{
    RngStream s(seed, 1000);
    std::vector<double> v(n);
    for (auto& x : v)
        x = s.next_standard_normal();
    return v;
}

std::vector<double> unit_data(std::uint64_t seed, std::size_t n)
{
    RngStream s(seed, 1001);
    std::vector<double> v(n);
    for (auto& x : v)
        x = s.next_open_uniform();
    return v;
}

RunConfig config_for(Scheme scheme, std::size_t horizon, std::size_t runs)
{
    RunConfig c;
    c.scheme = scheme;
    c.horizon = horizon;
    c.runs = runs;
    c.seed = 99;
    return c;
}
}  // namespace

TEST_CASE("zero forward steps return the observed statistic")
{
    auto const data = normal_data(1, 30);
    auto c = config_for(Scheme::hill_iid, 30, 5);
    for (auto stat : {StatisticSpec::mean(), StatisticSpec::variance(),
                      StatisticSpec::quantile(0.3)})
    {
        c.statistic = stat;
        auto const d = run_iid(c, data);
        auto const expected = compute_statistic(stat, data);
        REQUIRE(d.rows.size() == 5);
        for (auto const& row : d.rows)
            CHECK(row == expected);
    }
    c.scheme = Scheme::urn_iid;
    c.statistic = StatisticSpec::mean();
    for (auto const& row : run_iid(c, data).rows)
        CHECK(row[0] == sample_mean(data));

    c.horizon = 20;
    CHECK_THROWS_AS(run_iid(c, data), InvalidArgument);
}

TEST_CASE("automatic transform selection is echoed")
{
    auto c = config_for(Scheme::hill_iid, 100, 3);
    CHECK(run_iid(c, unit_data(2, 20)).transform == "identity");
    CHECK(run_iid(c, normal_data(2, 20)).transform == "logit");
    c.transform = TransformSpec::affine(-10, 10);
    CHECK(run_iid(c, normal_data(2, 20)).transform == "affine:-10:10");
}

TEST_CASE("forward draws stay on the data scale")
{
    auto c = config_for(Scheme::hill_iid, 200, 20);
    c.transform = TransformSpec::affine(0, 10);
    std::vector<double> data{1, 2, 3, 4, 5, 6};
    c.statistic = StatisticSpec::quantile(0.001);
    for (auto const& row : run_iid(c, data).rows)
    {
        CHECK(row[0] > 0);
        CHECK(row[0] < 1.5);
    }
    c.statistic = StatisticSpec::quantile(0.999);
    for (auto const& row : run_iid(c, data).rows)
    {
        CHECK(row[0] > 5.5);
        CHECK(row[0] < 10);
    }
}

TEST_CASE("results do not depend on threads or backend")
{
    auto const data = normal_data(3, 40);
    auto c = config_for(Scheme::hill_iid, 3000, 12);
    c.statistic = StatisticSpec::beta_moments();
    c.transform = TransformSpec::logit();
    c.statistic = StatisticSpec::mean();
    auto const base = run_iid(c, data);
    c.threads = 3;
    CHECK(run_iid(c, data).rows == base.rows);
    c.threads = 1;
    c.backend = StoreBackend::tree;
    CHECK(run_iid(c, data).rows == base.rows);
    c.backend = StoreBackend::vector;
    CHECK(run_iid(c, data).rows == base.rows);
    c.seed = 100;
    CHECK(run_iid(c, data).rows != base.rows);
}

TEST_CASE("trajectories")
{
    auto const steps = trajectory_checkpoints(50, 1000, 0);
    CHECK(steps.front() == 50);
    CHECK(steps.back() == 1000);
    CHECK(steps.size() >= 50);
    CHECK(steps.size() <= 52);
    auto const strided = trajectory_checkpoints(10, 45, 10);
    CHECK(strided == std::vector<std::size_t>{10, 20, 30, 40, 45});

    auto const data = unit_data(4, 25);
    auto c = config_for(Scheme::hill_iid, 400, 4);
    c.record_trajectories = true;
    c.trajectory_stride = 25;
    auto const d = run_iid(c, data);
    std::size_t per_run = trajectory_checkpoints(25, 400, 25).size();
    REQUIRE(d.trajectories.size() == 4 * per_run);
    for (std::size_t r = 0; r < 4; ++r)
    {
        auto const& first = d.trajectories[r * per_run];
        auto const& last = d.trajectories[(r + 1) * per_run - 1];
        CHECK(first.run == r);
        CHECK(first.step == 25);
        CHECK(first.values[0] == doctest::Approx(sample_mean(data)).epsilon(1e-15));
        CHECK(last.step == 400);
        CHECK(last.values == d.rows[r]);
    }
}

TEST_CASE("martingale diagnostics along Hill runs")
{
    auto c = config_for(Scheme::hill_iid, 1500, 5);
    c.martingale_diagnostics = true;
    auto const d = run_iid(c, unit_data(5, 30));
    REQUIRE(d.diagnostics.martingale);
    CHECK(d.diagnostics.martingale->steps_checked == 5 * 1470);
    CHECK(d.diagnostics.martingale->violations == 0);
    CHECK(d.diagnostics.martingale->worst_violation() <= 1e-12);
}

TEST_CASE("normal analytic law")
{
    auto const law = normal_analytic_law(0.3, 50, 1000);
    long double tail = 0;
    for (int i = 51; i <= 999; ++i)
        tail += 1.0L / ((long double)i * i);
    CHECK(law.t_n == 0.3);
    CHECK(std::abs(law.variance_last_draw - double(1 + tail)) <= 1e-15);
    CHECK(std::abs(law.variance_mean - double(tail + 1.0L / (1000.0L * 1000))) <= 1e-15);

    auto const data = normal_data(6, 50);
    auto c = config_for(Scheme::normal_analytic, 1000, 4000);
    auto const d = run_normal_analytic(c, data);
    REQUIRE(d.analytic);
    REQUIRE(d.names == std::vector<std::string>{"mean_N", "x_N"});
    auto const means = d.column(0);
    auto const lasts = d.column(1);
    // Relative SE of a sample variance from 4000 normal draws is about 2.2%
    CHECK(std::abs(oracle::variance(means) / law.variance_mean - 1) < 0.08);
    CHECK(std::abs(oracle::variance(lasts) / d.analytic->variance_last_draw - 1) < 0.08);
    CHECK(std::abs(oracle::mean(means) - d.analytic->t_n)
          < 3 * std::sqrt(d.analytic->variance_mean / 4000));

    c.horizon = 50;
    CHECK_THROWS_AS(run_normal_analytic(c, data), InvalidArgument);
}

TEST_CASE("urn forward means match Dirichlet-weighted means")
{
    auto const data = normal_data(7, 10);
    auto c = config_for(Scheme::urn_iid, 3000, 600);
    auto const urn = run_iid(c, data).column(0);
    RngStream s(8, 0);
    std::vector<double> direct;
    for (int r = 0; r < 600; ++r)
    {
        auto const w = next_dirichlet_uniform(s, data.size());
        double m = 0;
        for (std::size_t i = 0; i < data.size(); ++i)
            m += w[i] * data[i];
        direct.push_back(m);
    }
    // 1% critical value for two samples of 600 is about 0.094
    CHECK(oracle::ks_two_sample(urn, direct) < 0.094);
}

TEST_CASE("bivariate runs")
{
    auto const x = normal_data(9, 60);
    auto y = normal_data(10, 60);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = 0.5 * x[i] + 0.8 * y[i];
    auto c = config_for(Scheme::bivariate, 60, 3);
    c.statistic = StatisticSpec::correlation();
    auto const zero = run_bivariate(c, x, y);
    CHECK(zero.names == std::vector<std::string>{"rho_12"});
    CHECK(zero.rows[0] == zero.rows[2]);

    c.horizon = 600;
    c.runs = 20;
    for (auto v : {CopulaVariant::A, CopulaVariant::B})
    {
        c.variant = v;
        auto const d = run_bivariate(c, x, y);
        for (auto const& row : d.rows)
            CHECK(std::abs(row[0]) <= 1);
        CHECK(d.transform == "logit,logit");
    }
    c.statistic = StatisticSpec::mean();
    CHECK_THROWS_AS(run_bivariate(c, x, y), InvalidArgument);
}

TEST_CASE("two-margin multivariate run equals bivariate model A run")
{
    auto const x = normal_data(11, 40);
    auto const y = normal_data(12, 40);
    auto c = config_for(Scheme::bivariate, 500, 6);
    c.statistic = StatisticSpec::correlation();
    c.variant = CopulaVariant::A;
    c.record_trajectories = true;
    auto const biv = run_bivariate(c, x, y);
    Eigen::MatrixXd data(40, 2);
    for (int i = 0; i < 40; ++i)
    {
        data(i, 0) = x[i];
        data(i, 1) = y[i];
    }
    c.scheme = Scheme::multivariate;
    auto const multi = run_multivariate(c, data);
    CHECK(multi.names == biv.names);
    CHECK(multi.rows == biv.rows);
    REQUIRE(multi.trajectories.size() == biv.trajectories.size());
    for (std::size_t i = 0; i < multi.trajectories.size(); ++i)
        CHECK(multi.trajectories[i].values == biv.trajectories[i].values);
}

TEST_CASE("multivariate names and bounds")
{
    Eigen::MatrixXd data(30, 3);
    RngStream s(13, 0);
    for (int i = 0; i < 30; ++i)
        for (int k = 0; k < 3; ++k)
            data(i, k) = s.next_standard_normal() + (k == 2 ? data(i, 0) : 0.0);
    auto c = config_for(Scheme::multivariate, 400, 5);
    c.statistic = StatisticSpec::correlation();
    c.variant = CopulaVariant::A;
    auto const d = run_multivariate(c, data);
    CHECK(d.names == std::vector<std::string>{"rho_1_2", "rho_1_3", "rho_2_3"});
    for (auto const& row : d.rows)
        for (double r : row)
            CHECK(std::abs(r) <= 1);
}

TEST_CASE("dispatch by column layout")
{
    auto c = config_for(Scheme::hill_iid, 100, 2);
    auto const col = unit_data(14, 20);
    CHECK(run_experiment(c, {col}).rows == run_iid(c, col).rows);
    CHECK_THROWS(run_experiment(c, {col, col}));
}
