// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/hill.hpp
 * \brief Hill's one-step-ahead predictive on the unit interval.
 *
 * With order statistics X(1) < ... < X(m) and sentinels X(0) = 0,
 * X(m+1) = 1, the next value falls in each of the m + 1 gaps with
 * probability 1/(m+1) and is uniform inside its gap. The predictive CDF is
 * therefore the piecewise linear interpolant through (X(j), j/(m+1)).
 */
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hillpr/error.hpp"
#include "hillpr/order_statistic_tree.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/special.hpp"

namespace hillpr
{

//! Mean of x^r for x uniform on (lo, hi), in a cancellation-free form.
inline double uniform_power_mean(double lo, double hi, int r) noexcept
{
    // (hi^{r+1} - lo^{r+1}) / ((r+1)(hi-lo)) = sum_k lo^k hi^{r-k} / (r+1)
    double sum = 0;
    double lo_pow = 1;
    for (int k = 0; k <= r; ++k)
    {
        sum += lo_pow * std::pow(hi, r - k);
        lo_pow *= lo;
    }
    return sum / (r + 1);
}

template<class Store>
class BasicHillState
{
  public:
    using store_type = Store;

    //! Empty state: the predictive is uniform on (0, 1).
    BasicHillState() = default;

    //! Build from observed values; all must be distinct and inside (0, 1).
    explicit BasicHillState(std::span<double const> data)
    {
        if (data.empty())
        {
            throw InvalidArgument("Hill state needs at least one observation");
        }
        std::vector<double> sorted(data.begin(), data.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            check_unit(sorted[i]);
            if (i > 0 && sorted[i] == sorted[i - 1])
            {
                throw TieError("tied observations at value "
                               + std::to_string(sorted[i]));
            }
        }
        store_.reserve(sorted.size());
        for (double x : data)
        {
            store_.insert(x);
        }
    }

    std::size_t size() const noexcept { return store_.size(); }

    //! Order statistic j in [0, m+1], sentinels included.
    double order_statistic(std::size_t j) const
    {
        if (j == 0)
        {
            return 0.0;
        }
        if (j == store_.size() + 1)
        {
            return 1.0;
        }
        return store_.kth(j - 1);
    }

    double predictive_cdf(double x) const
    {
        if (!(x >= 0 && x <= 1))
        {
            throw DomainError("predictive CDF argument outside [0, 1]: "
                              + std::to_string(x));
        }
        if (x == 1)
        {
            return 1.0;
        }
        std::size_t const below = store_.count_le(x);
        double const lo = this->order_statistic(below);
        double const hi = this->order_statistic(below + 1);
        return (static_cast<double>(below) + (x - lo) / (hi - lo))
               / static_cast<double>(store_.size() + 1);
    }

    double predictive_quantile(Probability u) const
    {
        return this->quantile_in_gap(u.value()).value;
    }

    //! Draw from the predictive with one uniform, redrawing the
    //! probability-zero event of landing on an existing order statistic.
    double sample_next(RngStream& stream) const
    {
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt)
        {
            auto const q = this->quantile_in_gap(stream.next_open_uniform());
            if (q.strictly_inside)
            {
                return q.value;
            }
        }
        throw NumericalError("predictive draw kept landing on order statistics");
    }

    //! Insert a new value and return its 1-based order-statistic index.
    std::size_t insert(double x)
    {
        check_unit(x);
        return store_.insert(x) + 1;
    }

    double empirical_cdf(double x) const
    {
        if (store_.size() == 0)
        {
            return 0.0;
        }
        return static_cast<double>(store_.count_le(x))
               / static_cast<double>(store_.size());
    }

    //! Empirical raw moment (1/m) sum x_i^r.
    double moment(int r) const
    {
        check_order(r);
        if (store_.size() == 0)
        {
            throw StateError("empirical moment of an empty state");
        }
        double sum = 0;
        store_.for_each([&](double v) { sum += std::pow(v, r); });
        return sum / static_cast<double>(store_.size());
    }

    //! Exact E[X^r] under the piecewise-uniform predictive.
    double predictive_moment(int r) const
    {
        check_order(r);
        double sum = 0;
        double lo = 0;
        store_.for_each([&](double v) {
            sum += uniform_power_mean(lo, v, r);
            lo = v;
        });
        sum += uniform_power_mean(lo, 1.0, r);
        return sum / static_cast<double>(store_.size() + 1);
    }

    //! Values in increasing order.
    std::vector<double> values() const
    {
        std::vector<double> out;
        out.reserve(store_.size());
        store_.for_each([&](double v) { out.push_back(v); });
        return out;
    }

    Store const& store() const noexcept { return store_; }
    void reserve(std::size_t n) { store_.reserve(n); }

    //! Value from the inverse CDF plus whether it lies strictly in its gap.
    struct GapQuantile
    {
        double value;
        bool strictly_inside;
    };

    GapQuantile quantile_in_gap(double u) const
    {
        if (!(u > 0 && u < 1))
        {
            throw InvalidArgument("predictive quantile needs u in (0, 1)");
        }
        auto const pieces = static_cast<double>(store_.size() + 1);
        double const scaled = pieces * u;
        auto gap = static_cast<std::size_t>(std::ceil(scaled));
        gap = std::clamp<std::size_t>(gap, 1, store_.size() + 1);
        double const lo = this->order_statistic(gap - 1);
        double const hi = this->order_statistic(gap);
        double const x = lo + (hi - lo) * (scaled - static_cast<double>(gap - 1));
        return {x, lo < x && x < hi};
    }

  private:
    static constexpr int kMaxRedraws = 64;

    static void check_unit(double x)
    {
        if (!(x > 0 && x < 1))
        {
            throw DomainError("Hill value outside (0, 1): " + std::to_string(x));
        }
    }
    static void check_order(int r)
    {
        if (r < 1)
        {
            throw InvalidArgument("moment order must be positive");
        }
    }

    Store store_;
};

using HillState = BasicHillState<SortedVectorStore>;
using TreeHillState = BasicHillState<OrderStatisticTree>;

}  // namespace hillpr
