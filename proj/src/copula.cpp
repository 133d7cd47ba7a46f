// SPDX-License-Identifier: Apache-2.0
#include "hillpr/copula.hpp"

#include <cmath>
#include <string>

#include "hillpr/error.hpp"

namespace hillpr
{
namespace
{
// Rounding can push |R| a few ulps past one; anything larger is a bug.
constexpr double kCorrelationSlack = 1e-12;
constexpr double kUnitSnap = 1e-15;
constexpr double kSingularEigen = 1e-10;

double checked_ratio(double s, double s2_1, double s2_2)
{
    if (!(s2_1 > 0) || !(s2_2 > 0))
    {
        throw DegeneracyError("copula margin has zero variance");
    }
    double const r = s / std::sqrt(s2_1 * s2_2);
    if (std::abs(r) > 1)
    {
        if (std::abs(r) - 1 > kCorrelationSlack)
        {
            throw NumericalError("correlation escaped [-1, 1]: "
                                 + std::to_string(r));
        }
        return std::copysign(1.0, r);
    }
    return r;
}
}  // namespace

CopulaVariant parse_variant(std::string_view text)
{
    if (text == "A" || text == "a")
    {
        return CopulaVariant::A;
    }
    if (text == "B" || text == "b")
    {
        return CopulaVariant::B;
    }
    throw InvalidArgument("copula model must be A or B");
}

char to_char(CopulaVariant v) noexcept
{
    return v == CopulaVariant::A ? 'A' : 'B';
}

double mean_product(std::span<double const> a, std::span<double const> b)
{
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        sum += a[i] * b[i];
    }
    return sum / static_cast<double>(a.size());
}

//---------------------------------------------------------------------------//
BivariateCopula::BivariateCopula(std::span<double const> x_scores,
                                 std::span<double const> y_scores,
                                 CopulaVariant variant)
    : variant_(variant), m_(x_scores.size())
{
    if (x_scores.size() != y_scores.size())
    {
        throw InvalidArgument("copula margins need equal lengths");
    }
    if (x_scores.size() < 2)
    {
        throw InvalidArgument("copula initialization needs at least two pairs");
    }
    s2_1_ = mean_product(x_scores, x_scores);
    s2_2_ = mean_product(y_scores, y_scores);
    s_ = mean_product(x_scores, y_scores);
    if (!(s2_1_ > 0) || !(s2_2_ > 0))
    {
        throw DegeneracyError("normal scores are identically zero");
    }
}

BivariateCopula::BivariateCopula(
    CopulaVariant variant, double s2_1, double s2_2, double s, std::size_t m)
    : variant_(variant), s2_1_(s2_1), s2_2_(s2_2), s_(s), m_(m)
{
    if (m == 0)
    {
        throw InvalidArgument("copula step counter must be positive");
    }
}

double BivariateCopula::correlation() const
{
    return checked_ratio(s_, s2_1_, s2_2_);
}

std::pair<double, double> BivariateCopula::sample_pair(RngStream& stream) const
{
    double r = this->correlation();
    if (1 - std::abs(r) <= kUnitSnap)
    {
        r = std::copysign(1.0, r);
    }
    double const z1 = stream.next_standard_normal();
    double const z2 = stream.next_standard_normal();
    return {z1, r * z1 + std::sqrt(1 - r * r) * z2};
}

void BivariateCopula::update(double x, double y)
{
    if (variant_ == CopulaVariant::A)
    {
        double const scale = std::sqrt(s2_1_ * s2_2_);
        double const next_1 = running_average(s2_1_, s2_1_ * (x * x), m_);
        double const next_2 = running_average(s2_2_, s2_2_ * (y * y), m_);
        s_ = running_average(s_, scale * (x * y), m_);
        s2_1_ = next_1;
        s2_2_ = next_2;
    }
    else
    {
        s2_1_ = running_average(s2_1_, x * x, m_);
        s2_2_ = running_average(s2_2_, y * y, m_);
        s_ = running_average(s_, x * y, m_);
    }
    ++m_;
}

//---------------------------------------------------------------------------//
bool cholesky_lower(Eigen::MatrixXd const& a, Eigen::MatrixXd& l)
{
    auto const d = a.rows();
    l.setZero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        for (Eigen::Index j = 0; j <= i; ++j)
        {
            double sum = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
            {
                sum -= l(i, k) * l(j, k);
            }
            if (i == j)
            {
                if (!(sum > 0))
                {
                    return false;
                }
                l(i, i) = std::sqrt(sum);
            }
            else
            {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return true;
}

MultiCopula::MultiCopula(Eigen::MatrixXd const& scores)
    : m_(static_cast<std::size_t>(scores.rows()))
{
    auto const n = scores.rows();
    auto const d = scores.cols();
    if (d < 2)
    {
        throw InvalidArgument("multivariate copula needs at least two margins");
    }
    if (n < d)
    {
        throw InvalidArgument("multivariate copula needs at least d observations");
    }
    s_.resize(d, d);
    std::vector<std::vector<double>> columns(d);
    for (Eigen::Index k = 0; k < d; ++k)
    {
        columns[k].resize(n);
        for (Eigen::Index l = 0; l < n; ++l)
        {
            columns[k][l] = scores(l, k);
        }
    }
    for (Eigen::Index k = 0; k < d; ++k)
    {
        for (Eigen::Index h = k; h < d; ++h)
        {
            s_(k, h) = s_(h, k) = mean_product(columns[k], columns[h]);
        }
        if (!(s_(k, k) > 0))
        {
            throw DegeneracyError("margin " + std::to_string(k + 1)
                                  + " has zero score variance");
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        this->correlation_matrix(), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= kSingularEigen)
    {
        throw DegeneracyError("initial score covariance is singular");
    }
}

Eigen::MatrixXd MultiCopula::correlation_matrix() const
{
    auto const d = s_.rows();
    Eigen::MatrixXd r(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
    {
        r(k, k) = 1.0;
        for (Eigen::Index h = k + 1; h < d; ++h)
        {
            r(k, h) = r(h, k) = checked_ratio(s_(k, h), s_(k, k), s_(h, h));
        }
    }
    return r;
}

std::vector<double> MultiCopula::sample_vector(RngStream& stream)
{
    Eigen::MatrixXd const r = this->correlation_matrix();
    Eigen::MatrixXd l;
    if (!cholesky_lower(r, l))
    {
        bool factored = false;
        for (double jitter = 1e-12; jitter <= 1e-8 * (1 + 1e-9); jitter *= 10)
        {
            ++jitter_events_;
            max_jitter_ = std::max(max_jitter_, jitter);
            Eigen::MatrixXd shifted = r;
            shifted.diagonal().array() += jitter;
            if (cholesky_lower(shifted, l))
            {
                factored = true;
                break;
            }
        }
        if (!factored)
        {
            throw NumericalError("correlation matrix not factorizable after jitter");
        }
    }
    auto const d = r.rows();
    std::vector<double> z(d);
    for (auto& zi : z)
    {
        zi = stream.next_standard_normal();
    }
    std::vector<double> x(d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        double sum = l(i, 0) * z[0];
        for (Eigen::Index j = 1; j <= i; ++j)
        {
            sum += l(i, j) * z[j];
        }
        x[i] = sum;
    }
    return x;
}

void MultiCopula::update(std::span<double const> x)
{
    auto const d = s_.rows();
    if (static_cast<Eigen::Index>(x.size()) != d)
    {
        throw InvalidArgument("update vector has wrong dimension");
    }
    Eigen::VectorXd const diag = s_.diagonal();
    for (Eigen::Index k = 0; k < d; ++k)
    {
        s_(k, k) = running_average(diag[k], diag[k] * (x[k] * x[k]), m_);
        for (Eigen::Index h = k + 1; h < d; ++h)
        {
            double const scale = std::sqrt(diag[k] * diag[h]);
            s_(k, h) = s_(h, k) = running_average(s_(k, h), scale * (x[k] * x[h]), m_);
        }
    }
    ++m_;
}

}  // namespace hillpr
