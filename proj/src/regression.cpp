// SPDX-License-Identifier: Apache-2.0
#include "hillpr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hillpr/engine.hpp"
#include "hillpr/error.hpp"
#include "hillpr/hill.hpp"
#include "hillpr/rng.hpp"
#include "hillpr/special.hpp"
#include "run_pool.hpp"

namespace hillpr
{
namespace
{
constexpr std::size_t kRefitInterval = 500;
constexpr double kExactFitScale = 1e-10;
}  // namespace

OlsFit fit_ols(Eigen::MatrixXd const& design, Eigen::VectorXd const& y)
{
    auto const n = design.rows();
    auto const p = design.cols();
    if (y.size() != n)
    {
        throw InvalidArgument("response and design have different row counts");
    }
    if (p < 1 || n <= p)
    {
        throw InvalidArgument("regression needs more observations than coefficients");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p)
    {
        throw DegeneracyError("design matrix is rank deficient");
    }
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.rss = (y - design * fit.beta).squaredNorm();
    fit.count = static_cast<std::size_t>(n);
    fit.sigma = std::sqrt(fit.rss / static_cast<double>(n - p));
    double const scale = std::sqrt(y.squaredNorm() / static_cast<double>(n));
    if (!(fit.sigma > kExactFitScale * (1 + scale)))
    {
        throw DegeneracyError("residual scale is zero: data lie on an exact plane");
    }
    Eigen::MatrixXd const gram = design.transpose() * design;
    fit.gram_inverse = gram.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    return fit;
}

RecursiveOls::RecursiveOls(OlsFit fit) : fit_(std::move(fit)) {}

void RecursiveOls::add(Eigen::VectorXd const& x, double y)
{
    Eigen::VectorXd const g = fit_.gram_inverse * x;
    double const denom = 1 + x.dot(g);
    double const error = y - x.dot(fit_.beta);
    fit_.beta += g * (error / denom);
    fit_.gram_inverse -= (g * g.transpose()) / denom;
    fit_.rss += error * error / denom;
    ++fit_.count;
    auto const p = static_cast<double>(fit_.beta.size());
    fit_.sigma = std::sqrt(fit_.rss / (static_cast<double>(fit_.count) - p));
}

void RecursiveOls::resync(OlsFit fit)
{
    fit_ = std::move(fit);
}

namespace
{
/*!
 * Hill predictive over residuals that are re-standardized every step.
 *
 * A permutation sorting the residuals is kept between steps. The fit moves
 * by O(1/m) per step, so the permutation is nearly sorted and insertion sort
 * repairs it in close to linear time.
 */
class RecomputedResiduals
{
  public:
    //! Refresh the residual of every row and restore sorted order.
    void update(std::vector<double> const& flat_x,
                std::vector<double> const& flat_y,
                Eigen::VectorXd const& beta,
                double sigma)
    {
        auto const m = flat_y.size();
        auto const p = static_cast<std::size_t>(beta.size());
        resid_.resize(m);
        double const inv_sigma = 1 / sigma;
        double const* xi = flat_x.data();
        for (std::size_t i = 0; i < m; ++i, xi += p)
        {
            double fitted = 0;
            for (std::size_t k = 0; k < p; ++k)
            {
                fitted += xi[k] * beta[static_cast<Eigen::Index>(k)];
            }
            resid_[i] = (flat_y[i] - fitted) * inv_sigma;
        }
        while (order_.size() < m)
        {
            order_.push_back(order_.size());
        }
        for (std::size_t i = 1; i < m; ++i)
        {
            auto const idx = order_[i];
            double const key = resid_[idx];
            std::size_t j = i;
            while (j > 0 && resid_[order_[j - 1]] > key)
            {
                order_[j] = order_[j - 1];
                --j;
            }
            order_[j] = idx;
        }
    }

    //! Sampled standardized error, from one open uniform per attempt.
    double draw(RngStream& stream) const
    {
        auto const m = order_.size();
        double const slots = static_cast<double>(m + 1);
        for (int attempt = 0; attempt < 64; ++attempt)
        {
            double const t = slots * stream.next_open_uniform();
            auto const gap = std::min(static_cast<std::size_t>(std::ceil(t)), m + 1);
            double const lo = gap >= 2 ? expit(resid_[order_[gap - 2]]) : 0.0;
            double const hi = gap <= m ? expit(resid_[order_[gap - 1]]) : 1.0;
            double const u = lo + (hi - lo) * (t - static_cast<double>(gap - 1));
            if (u > lo && u < hi)
            {
                return logit(u);
            }
        }
        throw NumericalError("no residual draw strictly inside a predictive gap");
    }

  private:
    std::vector<double> resid_;
    std::vector<std::size_t> order_;
};
}  // namespace

PosteriorDraws run_regression(RunConfig const& config,
                              Eigen::VectorXd const& y,
                              Eigen::MatrixXd const& design)
{
    auto const n = static_cast<std::size_t>(design.rows());
    auto const p = design.cols();
    detail::check_run_shape(config, n, true);
    if (config.statistic.kind != StatisticSpec::Kind::ols_coefficients)
    {
        throw InvalidArgument("regression scheme reports ols-coefficients");
    }
    OlsFit const initial = fit_ols(design, y);
    bool const recompute = config.residual_update == ResidualUpdate::recompute;

    // Standardized residuals on the logistic scale seed the error predictive
    Eigen::VectorXd const resid = (y - design * initial.beta) / initial.sigma;
    std::vector<double> unit(n);
    std::size_t clamps = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        unit[i] = to_unit(TransformSpec::logit(), resid[static_cast<Eigen::Index>(i)],
                          &clamps);
    }
    // Construction also rejects tied residuals
    HillState const errors0(unit);

    std::vector<std::string> names;
    for (Eigen::Index k = 0; k < p; ++k)
    {
        names.push_back("beta_" + std::to_string(k + 1));
    }

    auto outcomes = detail::execute_runs(
        config, [&](std::size_t run, detail::RunOutcome& out) {
            RngStream stream(config.seed, run);
            HillState errors;
            if (!recompute)
            {
                errors = errors0;
                errors.reserve(config.horizon);
            }
            RecursiveOls ols(initial);
            std::vector<Eigen::Index> rows;
            std::vector<double> responses;
            RecomputedResiduals recomputed;
            rows.reserve(config.horizon - n);
            responses.reserve(config.horizon - n);
            // Row-major copy of every design row and response, for the
            // residual pass
            std::vector<double> flat_x;
            std::vector<double> flat_y;
            if (recompute)
            {
                auto const pp = static_cast<std::size_t>(p);
                flat_x.reserve(config.horizon * pp);
                flat_y.reserve(config.horizon);
                for (std::size_t i = 0; i < n; ++i)
                {
                    for (Eigen::Index k = 0; k < p; ++k)
                    {
                        flat_x.push_back(design(static_cast<Eigen::Index>(i), k));
                    }
                    flat_y.push_back(y[static_cast<Eigen::Index>(i)]);
                }
            }

            auto const row_of = [&](std::size_t i) {
                return i < n ? static_cast<Eigen::Index>(i) : rows[i - n];
            };
            auto const response_of = [&](std::size_t i) {
                return i < n ? y[static_cast<Eigen::Index>(i)] : responses[i - n];
            };

            std::vector<std::size_t> checkpoints;
            std::size_t next_checkpoint = 0;
            if (config.record_trajectories)
            {
                checkpoints = trajectory_checkpoints(n, config.horizon,
                                                     config.trajectory_stride);
            }
            auto maybe_record = [&](std::size_t m) {
                if (next_checkpoint < checkpoints.size()
                    && checkpoints[next_checkpoint] == m)
                {
                    ++next_checkpoint;
                    auto const& b = ols.beta();
                    out.trajectory.push_back(
                        {run, m, std::vector<double>(b.data(), b.data() + b.size())});
                }
            };
            maybe_record(n);

            for (std::size_t m = n; m < config.horizon; ++m)
            {
                auto const row = static_cast<Eigen::Index>(stream.next_index(n));
                double e = 0;
                double u = 0;
                if (recompute)
                {
                    recomputed.update(flat_x, flat_y, ols.beta(), ols.sigma());
                    e = recomputed.draw(stream);
                }
                else
                {
                    u = errors.sample_next(stream);
                    e = logit(u);
                }
                Eigen::VectorXd const x = design.row(row).transpose();
                double const response = x.dot(ols.beta()) + ols.sigma() * e;
                ols.add(x, response);
                if (!recompute)
                {
                    errors.insert(u);
                }
                rows.push_back(row);
                responses.push_back(response);
                if (recompute)
                {
                    for (Eigen::Index k = 0; k < p; ++k)
                    {
                        flat_x.push_back(x[k]);
                    }
                    flat_y.push_back(response);
                }

                if (rows.size() % kRefitInterval == 0)
                {
                    auto const total = static_cast<Eigen::Index>(m + 1);
                    Eigen::MatrixXd full(total, p);
                    Eigen::VectorXd full_y(total);
                    for (Eigen::Index i = 0; i < total; ++i)
                    {
                        auto const at = static_cast<std::size_t>(i);
                        full.row(i) = design.row(row_of(at));
                        full_y[i] = response_of(at);
                    }
                    OlsFit refit = fit_ols(full, full_y);
                    double const delta = (refit.beta - ols.beta()).cwiseAbs().maxCoeff();
                    out.max_refit_delta = std::max(out.max_refit_delta, delta);
                    ++out.refits;
                    ols.resync(std::move(refit));
                }
                maybe_record(m + 1);
            }
            auto const& b = ols.beta();
            out.row.assign(b.data(), b.data() + b.size());
        });
    auto draws = detail::merge_runs(config, std::move(names), std::move(outcomes));
    draws.diagnostics.clamp_events = clamps;
    draws.transform = "logit";
    return draws;
}

}  // namespace hillpr
