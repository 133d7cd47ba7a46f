// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/engine.hpp
 * \brief Forward predictive resampling over independent trajectories.
 *
 * Each run r draws from its own stream (seed, r), simulates the unobserved
 * values n+1..N from the one-step predictive, and reports the statistic of
 * interest on the completed sample. Runs may execute on several threads;
 * results are always merged in run order, so output does not depend on the
 * schedule.
 */
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hillpr/copula.hpp"
#include "hillpr/diagnostics.hpp"
#include "hillpr/statistics.hpp"
#include "hillpr/transforms.hpp"

namespace hillpr
{

enum class Scheme
{
    hill_iid,
    urn_iid,
    normal_analytic,
    bivariate,
    multivariate,
    regression,
};

std::string to_string(Scheme scheme);

enum class StoreBackend
{
    automatic,  //!< tree for horizons of 10^5 and beyond, else vector
    vector,
    tree,
};

//! How the regression residual predictive evolves between forward steps.
enum class ResidualUpdate
{
    //! Re-standardize every residual under the current fit before each draw.
    recompute,
    //! Keep the initial residuals and append each sampled error.
    append,
};

std::string to_string(ResidualUpdate mode);
ResidualUpdate parse_residual_update(std::string_view text);

struct RunConfig
{
    Scheme scheme{Scheme::hill_iid};
    std::size_t horizon{1000};
    std::size_t runs{100};
    std::uint64_t seed{0};
    CopulaVariant variant{CopulaVariant::B};
    //! Unset means: choose from the data (identity inside (0,1), else logit).
    std::optional<TransformSpec> transform;
    StatisticSpec statistic{StatisticSpec::mean()};
    bool record_trajectories{false};
    //! Steps between trajectory checkpoints; 0 means 50 even checkpoints.
    std::size_t trajectory_stride{0};
    bool martingale_diagnostics{false};
    //! Tolerate numerical failures in at most 1% of runs.
    bool skip_failed{false};
    std::size_t threads{1};
    StoreBackend backend{StoreBackend::automatic};
    ResidualUpdate residual_update{ResidualUpdate::recompute};
};

struct Diagnostics
{
    std::size_t clamp_events{0};
    std::size_t jitter_events{0};
    double max_jitter{0};
    std::size_t failed_runs{0};
    std::vector<std::size_t> failed_run_ids;
    //! Largest incremental-vs-refit OLS coefficient gap seen.
    double max_refit_delta{0};
    std::size_t refits{0};
    std::optional<MartingaleReport> martingale;
};

struct TrajectoryPoint
{
    std::size_t run;
    std::size_t step;
    std::vector<double> values;
};

//! Closed-form law of the normal-model baseline, given T_n.
struct NormalAnalytic
{
    double t_n{0};
    //! Var of the terminal forward draw X_N: 1 + sum_{i=n+1}^{N-1} 1/i^2.
    double variance_last_draw{0};
    //! Var of the mean of all N values: sum_{i=n+1}^{N} 1/i^2.
    double variance_mean{0};
};

struct PosteriorDraws
{
    std::vector<std::string> names;
    //! One row per completed run, in run order.
    std::vector<std::vector<double>> rows;
    std::vector<TrajectoryPoint> trajectories;
    Diagnostics diagnostics;
    std::optional<NormalAnalytic> analytic;
    std::string transform;  //!< resolved transform(s), for the config echo

    std::vector<double> column(std::size_t k) const;
};

//! Checkpoint sample sizes between n and N (both included).
std::vector<std::size_t>
trajectory_checkpoints(std::size_t n, std::size_t horizon, std::size_t stride);

NormalAnalytic normal_analytic_law(double t_n, std::size_t n, std::size_t horizon);

PosteriorDraws run_iid(RunConfig const& config, std::span<double const> data);
PosteriorDraws run_normal_analytic(RunConfig const& config,
                                   std::span<double const> data);
PosteriorDraws run_bivariate(RunConfig const& config,
                             std::span<double const> x,
                             std::span<double const> y);
//! Rows are observations, columns margins.
PosteriorDraws run_multivariate(RunConfig const& config,
                                Eigen::MatrixXd const& data);
PosteriorDraws run_regression(RunConfig const& config,
                              Eigen::VectorXd const& y,
                              Eigen::MatrixXd const& design);

/*!
 * Dispatch on config.scheme using a column-major data table.
 *
 * Column layout: one column for iid schemes, two for bivariate, d for
 * multivariate, and response followed by p design columns for regression.
 */
PosteriorDraws run_experiment(RunConfig const& config,
                              std::vector<std::vector<double>> const& columns);

}  // namespace hillpr
