// SPDX-License-Identifier: Apache-2.0
#include "hillpr/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hillpr/error.hpp"

namespace hillpr
{
namespace
{
constexpr double kLowTail = 0.02425;

// Acklam's coefficients
constexpr double a[] = {-3.969683028665376e+01,
                        2.209460984245205e+02,
                        -2.759285104469687e+02,
                        1.383577518672690e+02,
                        -3.066479806614716e+01,
                        2.506628277459239e+00};
constexpr double b[] = {-5.447609879822406e+01,
                        1.615858368580409e+02,
                        -1.556989798598866e+02,
                        6.680131188771972e+01,
                        -1.328068155288572e+01};
constexpr double c[] = {-7.784894002430293e-03,
                        -3.223964580411365e-01,
                        -2.400758277161838e+00,
                        -2.549732539343734e+00,
                        4.374664141464968e+00,
                        2.938163982698783e+00};
constexpr double d[] = {7.784695709041462e-03,
                        3.224671290700398e-01,
                        2.445134137142996e+00,
                        3.754408661907416e+00};

// Initial approximation for p in (0, 0.5]
double lower_half_guess(double p)
{
    if (p < kLowTail)
    {
        double const q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q
                + c[5])
               / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double const q = p - 0.5;
    double const r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
           * q
           / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}
}  // namespace

Probability::Probability(double value) : value_(value)
{
    if (!(value > 0 && value < 1))
    {
        throw InvalidArgument("probability must lie strictly inside (0, 1), got "
                              + std::to_string(value));
    }
}

double normal_cdf(double x)
{
    if (!std::isfinite(x))
    {
        throw InvalidArgument("normal_cdf requires a finite argument");
    }
    if (x < 0)
    {
        return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    }
    return 1 - 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_quantile(Probability prob)
{
    double const p = prob.value();
    if (p == 0.5)
    {
        return 0;
    }
    if (p > 0.5)
    {
        return -normal_quantile(Probability{1 - p});
    }

    double x = lower_half_guess(p);
    // Halley refinement; the residual is relative-accurate in the lower tail
    double const e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    double const u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1 + 0.5 * x * u);
    return x;
}

double logit(double x)
{
    if (!(x > 0 && x < 1))
    {
        throw DomainError("logit requires an argument in (0, 1), got "
                          + std::to_string(x));
    }
    return std::log(x) - std::log1p(-x);
}

double expit(double y) noexcept
{
    if (y >= 0)
    {
        return 1 / (1 + std::exp(-y));
    }
    double const e = std::exp(y);
    return e / (1 + e);
}

}  // namespace hillpr
