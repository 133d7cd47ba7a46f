// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/copula.hpp
 * \brief Recursive Gaussian-copula dependence between Hill margins.
 *
 * The state tracks running second moments of the normal scores. Under
 * model B they are plain running averages of the generated scores; under
 * model A each generated score is rescaled by the current standard
 * deviation before it enters the average. Either way the cross moment obeys
 * S^2 <= S2_1 * S2_2, so the implied correlation stays in [-1, 1].
 */
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hillpr/rng.hpp"

namespace hillpr
{

enum class CopulaVariant
{
    A,
    B,
};

CopulaVariant parse_variant(std::string_view text);
char to_char(CopulaVariant v) noexcept;

//! Running average step: (m * previous + increment) / (m + 1).
inline double running_average(double previous, double increment, std::size_t m)
{
    double const dm = static_cast<double>(m);
    return (dm * previous + increment) / (dm + 1);
}

//! (1/n) sum a_i b_i, accumulated in index order.
double mean_product(std::span<double const> a, std::span<double const> b);

class BivariateCopula
{
  public:
    BivariateCopula(std::span<double const> x_scores,
                    std::span<double const> y_scores,
                    CopulaVariant variant);

    //! Direct construction from moments, mostly for tests and replay.
    BivariateCopula(CopulaVariant variant,
                    double s2_1,
                    double s2_2,
                    double s,
                    std::size_t m);

    CopulaVariant variant() const noexcept { return variant_; }
    double s2_1() const noexcept { return s2_1_; }
    double s2_2() const noexcept { return s2_2_; }
    double cross() const noexcept { return s_; }
    std::size_t count() const noexcept { return m_; }

    //! R = S / sqrt(S2_1 S2_2); throws DegeneracyError on zero variance.
    double correlation() const;

    //! Standard normal pair with correlation R_m.
    std::pair<double, double> sample_pair(RngStream& stream) const;

    void update(double x, double y);

  private:
    CopulaVariant variant_;
    double s2_1_;
    double s2_2_;
    double s_;
    std::size_t m_;
};

//! Correlation-matrix counterpart of model A for d >= 2 margins.
class MultiCopula
{
  public:
    //! Rows are observations, columns margins (normal scores).
    explicit MultiCopula(Eigen::MatrixXd const& scores);

    std::size_t dims() const noexcept
    {
        return static_cast<std::size_t>(s_.rows());
    }
    std::size_t count() const noexcept { return m_; }
    Eigen::MatrixXd const& moments() const noexcept { return s_; }

    //! Unit-diagonal correlation matrix R_m.
    Eigen::MatrixXd correlation_matrix() const;

    //! Draw via a Cholesky factor of R_m, adding diagonal jitter on failure.
    std::vector<double> sample_vector(RngStream& stream);

    void update(std::span<double const> x);

    std::size_t jitter_events() const noexcept { return jitter_events_; }
    double max_jitter() const noexcept { return max_jitter_; }

  private:
    Eigen::MatrixXd s_;
    std::size_t m_;
    std::size_t jitter_events_{0};
    double max_jitter_{0};
};

//! Lower Cholesky factor; returns false if a pivot is not positive.
bool cholesky_lower(Eigen::MatrixXd const& a, Eigen::MatrixXd& l);

}  // namespace hillpr
