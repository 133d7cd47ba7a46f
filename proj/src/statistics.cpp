// SPDX-License-Identifier: Apache-2.0
#include "hillpr/statistics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hillpr/error.hpp"

namespace hillpr
{

StatisticSpec StatisticSpec::quantile(double q)
{
    if (!(q > 0 && q < 1))
    {
        throw InvalidArgument("quantile level must lie in (0, 1)");
    }
    return {Kind::quantile, q};
}

StatisticSpec StatisticSpec::parse(std::string_view text)
{
    if (text == "mean")
        return mean();
    if (text == "variance")
        return variance();
    if (text == "beta-moments")
        return beta_moments();
    if (text == "correlation")
        return correlation();
    if (text == "ols-coefficients")
        return ols_coefficients();
    constexpr std::string_view prefix = "quantile:";
    if (text.starts_with(prefix))
    {
        auto const level = text.substr(prefix.size());
        double q = 0;
        auto [ptr, ec]
            = std::from_chars(level.data(), level.data() + level.size(), q);
        if (ec != std::errc{} || ptr != level.data() + level.size())
        {
            throw InvalidArgument("bad quantile level '" + std::string(level)
                                  + "'");
        }
        return quantile(q);
    }
    throw InvalidArgument("unknown statistic '" + std::string(text) + "'");
}

std::string StatisticSpec::to_string() const
{
    switch (kind)
    {
        case Kind::mean:
            return "mean";
        case Kind::variance:
            return "variance";
        case Kind::quantile: {
            char buf[32];
            auto* end = std::to_chars(buf, buf + sizeof(buf), q).ptr;
            return "quantile:" + std::string(buf, end);
        }
        case Kind::beta_moments:
            return "beta-moments";
        case Kind::correlation:
            return "correlation";
        case Kind::ols_coefficients:
            return "ols-coefficients";
    }
    return {};
}

double sample_mean(std::span<double const> values)
{
    if (values.empty())
    {
        throw InvalidArgument("mean of an empty sample");
    }
    double sum = 0;
    for (double v : values)
    {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<double const> values)
{
    double const mu = sample_mean(values);
    if (values.size() < 2)
    {
        return 0;
    }
    double ss = 0;
    for (double v : values)
    {
        ss += (v - mu) * (v - mu);
    }
    return ss / static_cast<double>(values.size() - 1);
}

double sorted_quantile(std::span<double const> sorted, double q)
{
    if (sorted.empty())
    {
        throw InvalidArgument("quantile of an empty sample");
    }
    if (!(q >= 0 && q <= 1))
    {
        throw InvalidArgument("quantile level must lie in [0, 1]");
    }
    double const h = q * static_cast<double>(sorted.size() - 1);
    auto const lo = static_cast<std::size_t>(std::floor(h));
    std::size_t const hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_quantile(std::span<double const> values, double q)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile(sorted, q);
}

BetaParameters beta_from_moments(double theta, double sigma2)
{
    if (!(theta > 0 && theta < 1))
    {
        throw InversionError("beta mean must lie in (0, 1)");
    }
    double const spread = theta * (1 - theta) / sigma2 - 1;
    if (!(sigma2 > 0) || !(spread > 0) || !std::isfinite(spread))
    {
        throw InversionError("variance too large (or zero) for a beta law");
    }
    return {theta * spread, (1 - theta) * spread};
}

std::vector<double> compute_statistic(StatisticSpec const& spec,
                                      std::span<double const> values)
{
    switch (spec.kind)
    {
        case StatisticSpec::Kind::mean:
            return {sample_mean(values)};
        case StatisticSpec::Kind::variance:
            return {sample_variance(values)};
        case StatisticSpec::Kind::quantile:
            return {sample_quantile(values, spec.q)};
        case StatisticSpec::Kind::beta_moments: {
            double const theta = sample_mean(values);
            double const sigma2 = sample_variance(values);
            auto const ab = beta_from_moments(theta, sigma2);
            return {theta, sigma2, ab.a, ab.b};
        }
        case StatisticSpec::Kind::correlation:
        case StatisticSpec::Kind::ols_coefficients:
            break;
    }
    throw InvalidArgument("statistic '" + spec.to_string()
                          + "' is not a function of pooled sample values");
}

std::vector<std::string> statistic_names(StatisticSpec const& spec)
{
    switch (spec.kind)
    {
        case StatisticSpec::Kind::mean:
            return {"mean"};
        case StatisticSpec::Kind::variance:
            return {"variance"};
        case StatisticSpec::Kind::quantile:
            return {"quantile"};
        case StatisticSpec::Kind::beta_moments:
            return {"theta", "sigma2", "a", "b"};
        case StatisticSpec::Kind::correlation:
            return {"rho_12"};
        case StatisticSpec::Kind::ols_coefficients:
            break;
    }
    return {};
}

Summary summarize(std::vector<std::string> const& names,
                  std::vector<std::vector<double>> const& rows)
{
    if (rows.empty())
    {
        throw InvalidArgument("cannot summarize zero draws");
    }
    Summary summary;
    summary.draws = rows.size();
    summary.mcse_reliable = rows.size() >= 2;
    for (std::size_t k = 0; k < names.size(); ++k)
    {
        std::vector<double> column(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            column[i] = rows[i].at(k);
        }
        DimensionSummary dim;
        dim.name = names[k];
        dim.mean = sample_mean(column);
        dim.sd = std::sqrt(sample_variance(column));
        dim.mcse = dim.sd / std::sqrt(static_cast<double>(column.size()));
        std::sort(column.begin(), column.end());
        for (std::size_t j = 0; j < kSummaryLevels.size(); ++j)
        {
            dim.quantiles[j] = sorted_quantile(column, kSummaryLevels[j]);
        }
        summary.dimensions.push_back(std::move(dim));
    }
    return summary;
}

}  // namespace hillpr
