// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace hillpr
{

//! A probability strictly inside (0, 1); construction validates.
class Probability
{
  public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }

  private:
    double value_;
};

//! Standard normal distribution function, absolute error below 1e-12.
double normal_cdf(double x);

/*!
 * Standard normal quantile.
 *
 * A rational starting approximation (relative error about 1e-9) is
 * polished by one Halley step against normal_cdf. Upper-half arguments are
 * reflected through 1 - p, which is exact there.
 */
double normal_quantile(Probability p);

double logit(double x);
double expit(double y) noexcept;

}  // namespace hillpr
