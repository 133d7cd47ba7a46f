// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace hillpr
{

//! Ordinary least squares with sigma^2 = RSS / (m - p).
struct OlsFit
{
    Eigen::VectorXd beta;
    double sigma{0};
    double rss{0};
    Eigen::MatrixXd gram_inverse;
    std::size_t count{0};
};

/*!
 * Fit by column-pivoted QR.
 *
 * Throws DegeneracyError for a rank-deficient design or a residual scale
 * indistinguishable from zero (exactly linear data), InvalidArgument when
 * there are not more rows than columns.
 */
OlsFit fit_ols(Eigen::MatrixXd const& design, Eigen::VectorXd const& y);

/*!
 * Least squares kept current one observation at a time.
 *
 * Adding a row x with response y uses the rank-one identity
 *   G' = G - (G x)(G x)^T / (1 + x^T G x)
 * for the inverse Gram matrix G, and the matching coefficient and residual
 * sum-of-squares updates, so each step costs O(p^2).
 */
class RecursiveOls
{
  public:
    explicit RecursiveOls(OlsFit fit);

    void add(Eigen::VectorXd const& x, double y);
    //! Replace the running quantities with a fresh full fit.
    void resync(OlsFit fit);

    Eigen::VectorXd const& beta() const noexcept { return fit_.beta; }
    double sigma() const noexcept { return fit_.sigma; }
    double rss() const noexcept { return fit_.rss; }
    std::size_t count() const noexcept { return fit_.count; }
    Eigen::MatrixXd const& gram_inverse() const noexcept
    {
        return fit_.gram_inverse;
    }

  private:
    OlsFit fit_;
};

}  // namespace hillpr
