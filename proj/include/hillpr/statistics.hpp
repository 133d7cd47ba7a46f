// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hillpr
{

struct StatisticSpec
{
    enum class Kind
    {
        mean,
        variance,
        quantile,
        beta_moments,
        correlation,
        ols_coefficients,
    };

    Kind kind{Kind::mean};
    double q{0.5};  //!< level, quantile only

    static StatisticSpec mean() { return {Kind::mean}; }
    static StatisticSpec variance() { return {Kind::variance}; }
    static StatisticSpec quantile(double q);
    static StatisticSpec beta_moments() { return {Kind::beta_moments}; }
    static StatisticSpec correlation() { return {Kind::correlation}; }
    static StatisticSpec ols_coefficients() { return {Kind::ols_coefficients}; }

    //! Parse "mean", "variance", "quantile:q", "beta-moments", "correlation",
    //! "ols-coefficients".
    static StatisticSpec parse(std::string_view text);
    std::string to_string() const;

    //! True for statistics computed from the pooled sample values.
    bool is_sample_statistic() const noexcept
    {
        return kind == Kind::mean || kind == Kind::variance
               || kind == Kind::quantile || kind == Kind::beta_moments;
    }

    friend bool operator==(StatisticSpec const&, StatisticSpec const&) = default;
};

double sample_mean(std::span<double const> values);
//! Unbiased sample variance (divisor n - 1); zero for a single value.
double sample_variance(std::span<double const> values);
//! Linear interpolation between order statistics (Hyndman-Fan type 7).
double sample_quantile(std::span<double const> values, double q);
//! Same as sample_quantile on values already sorted ascending.
double sorted_quantile(std::span<double const> sorted, double q);

//! Beta(a, b) parameters matching mean theta and variance sigma2.
struct BetaParameters
{
    double a;
    double b;
};
BetaParameters beta_from_moments(double theta, double sigma2);

//! Evaluate a sample statistic; beta-moments yields (theta, sigma2, a, b).
std::vector<double> compute_statistic(StatisticSpec const& spec,
                                      std::span<double const> values);

//! Column names for a sample statistic.
std::vector<std::string> statistic_names(StatisticSpec const& spec);

inline constexpr std::array<double, 5> kSummaryLevels
    = {0.025, 0.25, 0.5, 0.75, 0.975};

struct DimensionSummary
{
    std::string name;
    double mean{0};
    double sd{0};
    double mcse{0};
    std::array<double, 5> quantiles{};
};

struct Summary
{
    std::size_t draws{0};
    //! False when fewer than two draws make the sd and MC-SE meaningless.
    bool mcse_reliable{false};
    std::vector<DimensionSummary> dimensions;
};

//! Per-column mean, sample sd, Monte Carlo SE and quantiles of draw rows.
Summary summarize(std::vector<std::string> const& names,
                  std::vector<std::vector<double>> const& rows);

}  // namespace hillpr
