// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/diagnostics.hpp
 * \brief Runtime checks of the moment martingale behind Hill trajectories.
 *
 * For every order r = 1..4 the monitor tracks the empirical moment
 * M_{m,r} and the exact predictive moment E(X_{m+1}^r | X_{1:m}) in O(1)
 * per insertion, and at each step checks
 *   m/(m+1) M <= E <= m/(m+1) M + 1/(m+1)
 *   (m M + E)/(m+1) <= M + 1/(m+1)^2.
 */
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hillpr/hill.hpp"

namespace hillpr
{

inline constexpr int kMonitoredOrders = 4;

struct MartingaleReport
{
    std::size_t steps_checked{0};
    //! Largest excursion outside the predictive-moment band, per order.
    std::array<double, kMonitoredOrders> max_band_violation{};
    //! Largest excess over the near-supermartingale bound, per order.
    std::array<double, kMonitoredOrders> max_supermartingale_violation{};
    //! Number of checks whose excursion exceeds the tolerance.
    std::size_t violations{0};
    //! Recorded (m, M_{m,1..4}) checkpoints.
    std::vector<std::size_t> steps;
    std::vector<std::array<double, kMonitoredOrders>> moments;

    double worst_violation() const noexcept;
    void merge(MartingaleReport const& other);
};

class MartingaleMonitor
{
  public:
    static constexpr double kTolerance = 1e-12;

    template<class Store>
    explicit MartingaleMonitor(BasicHillState<Store> const& state)
        : m_(state.size())
    {
        double lo = 0;
        state.store().for_each([&](double v) {
            for (int r = 1; r <= kMonitoredOrders; ++r)
            {
                power_sums_[r - 1] += std::pow(v, r);
                gap_means_[r - 1] += uniform_power_mean(lo, v, r);
            }
            lo = v;
        });
        for (int r = 1; r <= kMonitoredOrders; ++r)
        {
            gap_means_[r - 1] += uniform_power_mean(lo, 1.0, r);
        }
    }

    std::size_t count() const noexcept { return m_; }
    double moment(int r) const;
    double predictive_moment(int r) const;

    //! Check both bounds at the current step and fold into the report.
    void check(MartingaleReport& report) const;
    void record(MartingaleReport& report) const;

    //! Account for x inserted between its neighbours lo < x < hi.
    void on_insert(double lo, double x, double hi);

  private:
    std::size_t m_;
    std::array<double, kMonitoredOrders> power_sums_{};
    std::array<double, kMonitoredOrders> gap_means_{};
};

/*!
 * Run one Hill trajectory from unit-interval data to the horizon, checking
 * the martingale bounds at every step and recording moments every
 * \c record_stride steps.
 */
MartingaleReport trace_martingale(std::span<double const> unit_data,
                                  std::size_t horizon,
                                  RngStream& stream,
                                  std::size_t record_stride = 1);

}  // namespace hillpr
