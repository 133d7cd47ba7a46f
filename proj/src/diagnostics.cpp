// SPDX-License-Identifier: Apache-2.0
#include "hillpr/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace hillpr
{

double MartingaleReport::worst_violation() const noexcept
{
    double worst = 0;
    for (int r = 0; r < kMonitoredOrders; ++r)
    {
        worst = std::max({worst, max_band_violation[r],
                          max_supermartingale_violation[r]});
    }
    return worst;
}

void MartingaleReport::merge(MartingaleReport const& other)
{
    steps_checked += other.steps_checked;
    violations += other.violations;
    for (int r = 0; r < kMonitoredOrders; ++r)
    {
        max_band_violation[r]
            = std::max(max_band_violation[r], other.max_band_violation[r]);
        max_supermartingale_violation[r] = std::max(
            max_supermartingale_violation[r], other.max_supermartingale_violation[r]);
    }
}

double MartingaleMonitor::moment(int r) const
{
    return power_sums_.at(r - 1) / static_cast<double>(m_);
}

double MartingaleMonitor::predictive_moment(int r) const
{
    return gap_means_.at(r - 1) / static_cast<double>(m_ + 1);
}

void MartingaleMonitor::check(MartingaleReport& report) const
{
    double const m = static_cast<double>(m_);
    double const step = 1 / (m + 1);
    bool violated = false;
    for (int r = 1; r <= kMonitoredOrders; ++r)
    {
        double const emp = this->moment(r);
        double const pred = this->predictive_moment(r);
        double const lower = m * step * emp;
        double const upper = lower + step;
        double const band = std::max({0.0, lower - pred, pred - upper});
        double const next_expected = (m * emp + pred) * step;
        double const excess
            = std::max(0.0, next_expected - emp - step * step);
        report.max_band_violation[r - 1]
            = std::max(report.max_band_violation[r - 1], band);
        report.max_supermartingale_violation[r - 1]
            = std::max(report.max_supermartingale_violation[r - 1], excess);
        violated = violated || band > kTolerance || excess > kTolerance;
    }
    ++report.steps_checked;
    if (violated)
    {
        ++report.violations;
    }
}

void MartingaleMonitor::record(MartingaleReport& report) const
{
    std::array<double, kMonitoredOrders> row{};
    for (int r = 1; r <= kMonitoredOrders; ++r)
    {
        row[r - 1] = this->moment(r);
    }
    report.steps.push_back(m_);
    report.moments.push_back(row);
}

void MartingaleMonitor::on_insert(double lo, double x, double hi)
{
    for (int r = 1; r <= kMonitoredOrders; ++r)
    {
        power_sums_[r - 1] += std::pow(x, r);
        gap_means_[r - 1] += uniform_power_mean(lo, x, r)
                             + uniform_power_mean(x, hi, r)
                             - uniform_power_mean(lo, hi, r);
    }
    ++m_;
}

MartingaleReport trace_martingale(std::span<double const> unit_data,
                                  std::size_t horizon,
                                  RngStream& stream,
                                  std::size_t record_stride)
{
    HillState state(unit_data);
    state.reserve(horizon);
    MartingaleMonitor monitor(state);
    MartingaleReport report;
    record_stride = std::max<std::size_t>(record_stride, 1);
    monitor.record(report);
    for (std::size_t m = state.size(); m < horizon; ++m)
    {
        monitor.check(report);
        double const x = state.sample_next(stream);
        std::size_t const j = state.insert(x);
        monitor.on_insert(state.order_statistic(j - 1), x,
                          state.order_statistic(j + 1));
        if ((m + 1 - unit_data.size()) % record_stride == 0 || m + 1 == horizon)
        {
            monitor.record(report);
        }
    }
    return report;
}

}  // namespace hillpr
