// SPDX-License-Identifier: Apache-2.0
#include "hillpr/selftest.hpp"

#include <cmath>
#include <sstream>

#include "hillpr/engine.hpp"
#include "hillpr/hill.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/statistics.hpp"

namespace hillpr
{

std::vector<double> synthetic_normal_data(std::uint64_t seed, std::size_t n)
{
    RngStream stream(seed, kSyntheticDataStream);
    std::vector<double> data(n);
    for (auto& x : data)
    {
        x = stream.next_standard_normal();
    }
    return data;
}

CheckResult check_interval_uniformity(std::uint64_t seed, std::size_t draws)
{
    constexpr std::size_t n = 20;
    RngStream data_stream(seed, kSyntheticDataStream + 1);
    std::vector<double> data(n);
    for (auto& x : data)
    {
        x = data_stream.next_open_uniform();
    }
    HillState const state(data);

    std::vector<std::size_t> counts(n + 1, 0);
    RngStream stream(seed, 0);
    for (std::size_t i = 0; i < draws; ++i)
    {
        double const x = state.sample_next(stream);
        // Gap index: number of order statistics below x
        ++counts[state.store().count_le(x)];
    }

    double const p = 1.0 / static_cast<double>(n + 1);
    double const se = std::sqrt(p * (1 - p) / static_cast<double>(draws));
    double worst = 0;
    for (auto c : counts)
    {
        double const freq = static_cast<double>(c) / static_cast<double>(draws);
        worst = std::max(worst, std::abs(freq - p) / se);
    }
    CheckResult result;
    result.name = "interval-uniformity";
    result.passed = worst <= 3;
    std::ostringstream os;
    os << "n=" << n << " draws=" << draws << " worst |freq-1/(n+1)|/se=" << worst
       << " (limit 3)";
    result.detail = os.str();
    return result;
}

CheckResult check_normal_analytic(std::uint64_t seed, std::size_t runs)
{
    auto const data = synthetic_normal_data(seed, 50);
    RunConfig config;
    config.scheme = Scheme::normal_analytic;
    config.horizon = 1000;
    config.runs = runs;
    config.seed = seed;
    auto const draws = run_normal_analytic(config, data);
    auto const& law = *draws.analytic;

    auto const last = draws.column(1);
    double const mean = sample_mean(last);
    double const var = sample_variance(last);
    double const se = std::sqrt(var / static_cast<double>(last.size()));
    double const rel = std::abs(var - law.variance_last_draw) / law.variance_last_draw;
    double const zmean = std::abs(mean - law.t_n) / se;

    CheckResult result;
    result.name = "normal-analytic";
    result.passed = rel <= 0.02 && zmean <= 3;
    std::ostringstream os;
    os << "runs=" << runs << " var(x_N)=" << var << " expected "
       << law.variance_last_draw << " (rel " << rel << ", limit 0.02); mean "
       << mean << " vs T_n " << law.t_n << " (" << zmean << " se, limit 3)";
    result.detail = os.str();
    return result;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed)
{
    return {check_interval_uniformity(seed), check_normal_analytic(seed)};
}

}  // namespace hillpr
