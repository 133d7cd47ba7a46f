// SPDX-License-Identifier: Apache-2.0
#include "hillpr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hillpr/error.hpp"
#include "hillpr/hill.hpp"
#include "hillpr/special.hpp"
#include "hillpr/urn.hpp"
#include "run_pool.hpp"

namespace hillpr
{
namespace detail
{

PosteriorDraws merge_runs(RunConfig const& config,
                          std::vector<std::string> names,
                          std::vector<RunOutcome>&& outcomes)
{
    PosteriorDraws draws;
    draws.names = std::move(names);
    auto& diag = draws.diagnostics;
    std::exception_ptr first_numerical;
    for (std::size_t run = 0; run < outcomes.size(); ++run)
    {
        auto& out = outcomes[run];
        if (out.error && !out.numerical_failure)
        {
            std::rethrow_exception(out.error);
        }
        if (out.error)
        {
            if (!first_numerical)
            {
                first_numerical = out.error;
            }
            ++diag.failed_runs;
            diag.failed_run_ids.push_back(run);
            continue;
        }
        draws.rows.push_back(std::move(out.row));
        for (auto& point : out.trajectory)
        {
            draws.trajectories.push_back(std::move(point));
        }
        diag.jitter_events += out.jitter_events;
        diag.max_jitter = std::max(diag.max_jitter, out.max_jitter);
        diag.max_refit_delta = std::max(diag.max_refit_delta, out.max_refit_delta);
        diag.refits += out.refits;
        if (out.martingale)
        {
            if (!diag.martingale)
            {
                diag.martingale = std::move(out.martingale);
            }
            else
            {
                diag.martingale->merge(*out.martingale);
            }
        }
    }
    if (diag.failed_runs > 0)
    {
        if (!config.skip_failed)
        {
            std::rethrow_exception(first_numerical);
        }
        if (diag.failed_runs * 100 > config.runs)
        {
            throw NumericalError(std::to_string(diag.failed_runs) + " of "
                                 + std::to_string(config.runs)
                                 + " runs failed, above the 1% tolerance");
        }
    }
    return draws;
}

void check_run_shape(RunConfig const& config, std::size_t n, bool allow_zero_steps)
{
    if (config.runs == 0)
    {
        throw InvalidArgument("at least one run is required");
    }
    if (n == 0)
    {
        throw InvalidArgument("no observed data");
    }
    if (config.horizon < n || (!allow_zero_steps && config.horizon == n))
    {
        throw InvalidArgument("horizon " + std::to_string(config.horizon)
                              + " must exceed the " + std::to_string(n)
                              + " observations");
    }
}

}  // namespace detail

namespace
{
using detail::RunOutcome;

bool use_tree(RunConfig const& config)
{
    return config.backend == StoreBackend::tree
           || (config.backend == StoreBackend::automatic
               && config.horizon >= 100000);
}

void require_sample_statistic(RunConfig const& config)
{
    if (!config.statistic.is_sample_statistic())
    {
        throw InvalidArgument("statistic '" + config.statistic.to_string()
                              + "' does not apply to scheme "
                              + to_string(config.scheme));
    }
}

class CheckpointCursor
{
  public:
    CheckpointCursor(RunConfig const& config, std::size_t n)
    {
        if (config.record_trajectories)
        {
            steps_ = trajectory_checkpoints(n, config.horizon,
                                            config.trajectory_stride);
        }
    }
    //! True when sample size m is the next checkpoint (advances the cursor).
    bool due(std::size_t m)
    {
        if (next_ < steps_.size() && steps_[next_] == m)
        {
            ++next_;
            return true;
        }
        return false;
    }
    std::vector<std::size_t> const& steps() const { return steps_; }

  private:
    std::vector<std::size_t> steps_;
    std::size_t next_{0};
};

template<class State>
void hill_trajectory(RunConfig const& config,
                     std::span<double const> data,
                     State const& initial,
                     TransformSpec const& transform,
                     std::size_t run,
                     RunOutcome& out)
{
    RngStream stream(config.seed, run);
    State state = initial;
    state.reserve(config.horizon);
    std::vector<double> values(data.begin(), data.end());
    values.reserve(config.horizon);

    std::optional<MartingaleMonitor> monitor;
    if (config.martingale_diagnostics)
    {
        monitor.emplace(state);
        out.martingale.emplace();
        monitor->record(*out.martingale);
    }
    CheckpointCursor checkpoints(config, data.size());
    auto maybe_record = [&] {
        if (checkpoints.due(values.size()))
        {
            out.trajectory.push_back(
                {run, values.size(), compute_statistic(config.statistic, values)});
            if (monitor)
            {
                monitor->record(*out.martingale);
            }
        }
    };
    maybe_record();
    while (values.size() < config.horizon)
    {
        if (monitor)
        {
            monitor->check(*out.martingale);
        }
        double const u = state.sample_next(stream);
        std::size_t const j = state.insert(u);
        if (monitor)
        {
            monitor->on_insert(state.order_statistic(j - 1), u,
                               state.order_statistic(j + 1));
        }
        values.push_back(from_unit(transform, u));
        maybe_record();
    }
    out.row = compute_statistic(config.statistic, values);
}

template<class State>
PosteriorDraws run_hill_iid(RunConfig const& config,
                            std::span<double const> data,
                            TransformSpec const& transform,
                            std::size_t& clamps)
{
    auto const unit = to_unit(transform, data, &clamps);
    State const initial(unit);
    auto outcomes = detail::execute_runs(config, [&](std::size_t run, RunOutcome& out) {
        hill_trajectory(config, data, initial, transform, run, out);
    });
    return detail::merge_runs(config, statistic_names(config.statistic),
                              std::move(outcomes));
}

PosteriorDraws run_urn_iid(RunConfig const& config, std::span<double const> data)
{
    UrnState const initial(data);
    auto outcomes = detail::execute_runs(config, [&](std::size_t run, RunOutcome& out) {
        RngStream stream(config.seed, run);
        UrnState urn = initial;
        std::vector<double> values(data.begin(), data.end());
        values.reserve(config.horizon);
        CheckpointCursor checkpoints(config, data.size());
        auto maybe_record = [&] {
            if (checkpoints.due(values.size()))
            {
                out.trajectory.push_back(
                    {run, values.size(), compute_statistic(config.statistic, values)});
            }
        };
        maybe_record();
        while (values.size() < config.horizon)
        {
            std::size_t const atom = urn.sample_atom(stream);
            urn.insert_atom(atom);
            values.push_back(urn.atom(atom));
            maybe_record();
        }
        out.row = compute_statistic(config.statistic, values);
    });
    return detail::merge_runs(config, statistic_names(config.statistic),
                              std::move(outcomes));
}

//! Redraw until both margins land strictly inside a predictive gap.
template<class State, class Draw>
std::vector<double> copula_step(std::vector<State>& margins, Draw&& draw_scores)
{
    std::size_t const d = margins.size();
    std::vector<double> unit(d);
    for (int attempt = 0; attempt < 64; ++attempt)
    {
        std::vector<double> scores = draw_scores();
        bool ok = true;
        for (std::size_t k = 0; k < d && ok; ++k)
        {
            double const u = normal_cdf(scores[k]);
            if (!(u > 0 && u < 1))
            {
                ok = false;
                break;
            }
            auto const q = margins[k].quantile_in_gap(u);
            ok = q.strictly_inside;
            unit[k] = q.value;
        }
        if (ok)
        {
            for (std::size_t k = 0; k < d; ++k)
            {
                margins[k].insert(unit[k]);
            }
            scores.insert(scores.end(), unit.begin(), unit.end());
            return scores;
        }
    }
    throw NumericalError("copula draw kept landing on order statistics");
}

struct MarginSetup
{
    std::vector<TransformSpec> transforms;
    std::vector<std::vector<double>> unit;
    std::string description;
};

MarginSetup setup_margins(RunConfig const& config,
                          std::vector<std::span<double const>> const& columns,
                          std::size_t& clamps)
{
    MarginSetup setup;
    for (std::size_t k = 0; k < columns.size(); ++k)
    {
        auto const spec = config.transform.value_or(choose_transform(columns[k]));
        setup.transforms.push_back(spec);
        setup.unit.push_back(to_unit(spec, columns[k], &clamps));
        if (k > 0)
        {
            setup.description += ",";
        }
        setup.description += spec.to_string();
    }
    return setup;
}

template<class State>
PosteriorDraws run_bivariate_impl(RunConfig const& config,
                                  std::span<double const> x,
                                  std::span<double const> y,
                                  std::size_t& clamps,
                                  std::string& description)
{
    auto const setup = setup_margins(config, {x, y}, clamps);
    description = setup.description;
    std::vector<State> const initial{State(setup.unit[0]), State(setup.unit[1])};
    BivariateCopula const copula0(gaussian_scores(x), gaussian_scores(y),
                                  config.variant);

    auto outcomes = detail::execute_runs(config, [&](std::size_t run, RunOutcome& out) {
        RngStream stream(config.seed, run);
        auto margins = initial;
        for (auto& m : margins)
        {
            m.reserve(config.horizon);
        }
        BivariateCopula copula = copula0;
        CheckpointCursor checkpoints(config, x.size());
        auto maybe_record = [&](std::size_t m) {
            if (checkpoints.due(m))
            {
                out.trajectory.push_back({run, m, {copula.correlation()}});
            }
        };
        maybe_record(x.size());
        for (std::size_t m = x.size(); m < config.horizon; ++m)
        {
            auto const step = copula_step(margins, [&] {
                auto const [sx, sy] = copula.sample_pair(stream);
                return std::vector<double>{sx, sy};
            });
            copula.update(step[0], step[1]);
            maybe_record(m + 1);
        }
        out.row = {copula.correlation()};
    });
    return detail::merge_runs(config, {"rho_12"}, std::move(outcomes));
}

std::vector<std::string> correlation_names(std::size_t d)
{
    std::vector<std::string> names;
    for (std::size_t k = 0; k < d; ++k)
    {
        for (std::size_t h = k + 1; h < d; ++h)
        {
            names.push_back("rho_" + std::to_string(k + 1) + "_"
                            + std::to_string(h + 1));
        }
    }
    if (d == 2)
    {
        names = {"rho_12"};
    }
    return names;
}

std::vector<double> upper_triangle(Eigen::MatrixXd const& r)
{
    std::vector<double> out;
    for (Eigen::Index k = 0; k < r.rows(); ++k)
    {
        for (Eigen::Index h = k + 1; h < r.cols(); ++h)
        {
            out.push_back(r(k, h));
        }
    }
    return out;
}

template<class State>
PosteriorDraws run_multivariate_impl(RunConfig const& config,
                                     Eigen::MatrixXd const& data,
                                     std::size_t& clamps,
                                     std::string& description)
{
    auto const n = static_cast<std::size_t>(data.rows());
    auto const d = static_cast<std::size_t>(data.cols());
    std::vector<std::vector<double>> columns(d);
    std::vector<std::span<double const>> views;
    Eigen::MatrixXd scores(data.rows(), data.cols());
    for (std::size_t k = 0; k < d; ++k)
    {
        columns[k].resize(n);
        for (std::size_t l = 0; l < n; ++l)
        {
            columns[k][l] = data(static_cast<Eigen::Index>(l),
                                 static_cast<Eigen::Index>(k));
        }
        auto const s = gaussian_scores(columns[k]);
        for (std::size_t l = 0; l < n; ++l)
        {
            scores(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k))
                = s[l];
        }
    }
    for (auto const& c : columns)
    {
        views.emplace_back(c);
    }
    auto const setup = setup_margins(config, views, clamps);
    description = setup.description;
    std::vector<State> initial;
    for (auto const& u : setup.unit)
    {
        initial.emplace_back(u);
    }
    MultiCopula const copula0(scores);

    auto outcomes = detail::execute_runs(config, [&](std::size_t run, RunOutcome& out) {
        RngStream stream(config.seed, run);
        auto margins = initial;
        for (auto& m : margins)
        {
            m.reserve(config.horizon);
        }
        MultiCopula copula = copula0;
        CheckpointCursor checkpoints(config, n);
        auto maybe_record = [&](std::size_t m) {
            if (checkpoints.due(m))
            {
                out.trajectory.push_back(
                    {run, m, upper_triangle(copula.correlation_matrix())});
            }
        };
        maybe_record(n);
        for (std::size_t m = n; m < config.horizon; ++m)
        {
            auto step = copula_step(margins, [&] {
                return copula.sample_vector(stream);
            });
            step.resize(d);
            copula.update(step);
            maybe_record(m + 1);
        }
        out.row = upper_triangle(copula.correlation_matrix());
        out.jitter_events = copula.jitter_events();
        out.max_jitter = copula.max_jitter();
    });
    return detail::merge_runs(config, correlation_names(d), std::move(outcomes));
}

}  // namespace

//---------------------------------------------------------------------------//
std::string to_string(Scheme scheme)
{
    switch (scheme)
    {
        case Scheme::hill_iid:
            return "hill-iid";
        case Scheme::urn_iid:
            return "urn-iid";
        case Scheme::normal_analytic:
            return "normal-analytic";
        case Scheme::bivariate:
            return "bivariate";
        case Scheme::multivariate:
            return "multivariate";
        case Scheme::regression:
            return "regression";
    }
    return {};
}

std::string to_string(ResidualUpdate mode)
{
    return mode == ResidualUpdate::append ? "append" : "recompute";
}

ResidualUpdate parse_residual_update(std::string_view text)
{
    if (text == "recompute")
        return ResidualUpdate::recompute;
    if (text == "append")
        return ResidualUpdate::append;
    throw InvalidArgument("residual update must be recompute or append, got '"
                          + std::string(text) + "'");
}

std::vector<double> PosteriorDraws::column(std::size_t k) const
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (auto const& row : rows)
    {
        out.push_back(row.at(k));
    }
    return out;
}

std::vector<std::size_t>
trajectory_checkpoints(std::size_t n, std::size_t horizon, std::size_t stride)
{
    std::vector<std::size_t> steps{n};
    if (horizon <= n)
    {
        return steps;
    }
    std::size_t const span = horizon - n;
    if (stride > 0)
    {
        for (std::size_t m = n + stride; m < horizon; m += stride)
        {
            steps.push_back(m);
        }
    }
    else
    {
        constexpr std::size_t kCheckpoints = 50;
        for (std::size_t k = 1; k < kCheckpoints; ++k)
        {
            std::size_t const m = n + (span * k + kCheckpoints / 2) / kCheckpoints;
            if (m > steps.back() && m < horizon)
            {
                steps.push_back(m);
            }
        }
    }
    steps.push_back(horizon);
    return steps;
}

NormalAnalytic normal_analytic_law(double t_n, std::size_t n, std::size_t horizon)
{
    NormalAnalytic law;
    law.t_n = t_n;
    double tail = 0;
    // Sum smallest terms first
    for (std::size_t i = horizon - 1; i > n; --i)
    {
        double const di = static_cast<double>(i);
        tail += 1 / (di * di);
    }
    double const last = static_cast<double>(horizon);
    law.variance_last_draw = 1 + tail;
    law.variance_mean = tail + (horizon > n ? 1 / (last * last) : 0.0);
    return law;
}

PosteriorDraws run_iid(RunConfig const& config, std::span<double const> data)
{
    detail::check_run_shape(config, data.size(), true);
    require_sample_statistic(config);
    if (config.scheme == Scheme::urn_iid)
    {
        auto draws = run_urn_iid(config, data);
        draws.transform = "none";
        return draws;
    }
    if (config.scheme != Scheme::hill_iid)
    {
        throw InvalidArgument("run_iid handles the hill-iid and urn-iid schemes");
    }
    auto const transform = config.transform.value_or(choose_transform(data));
    std::size_t clamps = 0;
    auto draws = use_tree(config)
                     ? run_hill_iid<TreeHillState>(config, data, transform, clamps)
                     : run_hill_iid<HillState>(config, data, transform, clamps);
    draws.diagnostics.clamp_events = clamps;
    draws.transform = transform.to_string();
    return draws;
}

PosteriorDraws run_normal_analytic(RunConfig const& config,
                                   std::span<double const> data)
{
    detail::check_run_shape(config, data.size(), false);
    double const t_n = sample_mean(data);
    std::size_t const n = data.size();
    auto outcomes = detail::execute_runs(config, [&](std::size_t run, RunOutcome& out) {
        RngStream stream(config.seed, run);
        double mean = t_n;
        double last = data.back();
        CheckpointCursor checkpoints(config, n);
        if (checkpoints.due(n))
        {
            out.trajectory.push_back({run, n, {mean, last}});
        }
        for (std::size_t m = n; m < config.horizon; ++m)
        {
            last = mean + stream.next_standard_normal();
            mean = running_average(mean, last, m);
            if (checkpoints.due(m + 1))
            {
                out.trajectory.push_back({run, m + 1, {mean, last}});
            }
        }
        out.row = {mean, last};
    });
    auto draws = detail::merge_runs(config, {"mean_N", "x_N"}, std::move(outcomes));
    draws.analytic = normal_analytic_law(t_n, n, config.horizon);
    draws.transform = "none";
    return draws;
}

PosteriorDraws run_bivariate(RunConfig const& config,
                             std::span<double const> x,
                             std::span<double const> y)
{
    if (x.size() != y.size())
    {
        throw InvalidArgument("bivariate margins need equal lengths");
    }
    if (x.size() < 2)
    {
        throw InvalidArgument("bivariate scheme needs at least two observations");
    }
    detail::check_run_shape(config, x.size(), true);
    if (config.statistic.kind != StatisticSpec::Kind::correlation)
    {
        throw InvalidArgument("bivariate scheme reports the correlation statistic");
    }
    std::size_t clamps = 0;
    std::string description;
    auto draws = use_tree(config)
                     ? run_bivariate_impl<TreeHillState>(config, x, y, clamps,
                                                         description)
                     : run_bivariate_impl<HillState>(config, x, y, clamps,
                                                     description);
    draws.diagnostics.clamp_events = clamps;
    draws.transform = description;
    return draws;
}

PosteriorDraws run_multivariate(RunConfig const& config, Eigen::MatrixXd const& data)
{
    if (data.cols() < 2)
    {
        throw InvalidArgument("multivariate scheme needs at least two columns");
    }
    detail::check_run_shape(config, static_cast<std::size_t>(data.rows()), true);
    if (config.statistic.kind != StatisticSpec::Kind::correlation)
    {
        throw InvalidArgument("multivariate scheme reports the correlation statistic");
    }
    std::size_t clamps = 0;
    std::string description;
    auto draws = use_tree(config) ? run_multivariate_impl<TreeHillState>(
                     config, data, clamps, description)
                                  : run_multivariate_impl<HillState>(
                                      config, data, clamps, description);
    draws.diagnostics.clamp_events = clamps;
    draws.transform = description;
    return draws;
}

PosteriorDraws run_experiment(RunConfig const& config,
                              std::vector<std::vector<double>> const& columns)
{
    auto need = [&](std::size_t count) {
        if (columns.size() != count)
        {
            throw InvalidArgument("scheme " + to_string(config.scheme) + " expects "
                                  + std::to_string(count) + " column(s), got "
                                  + std::to_string(columns.size()));
        }
    };
    auto as_matrix = [&](std::size_t first) {
        std::size_t const rows = columns.empty() ? 0 : columns[0].size();
        Eigen::MatrixXd m(rows, columns.size() - first);
        for (std::size_t k = first; k < columns.size(); ++k)
        {
            for (std::size_t i = 0; i < rows; ++i)
            {
                m(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(k - first))
                    = columns[k][i];
            }
        }
        return m;
    };
    switch (config.scheme)
    {
        case Scheme::hill_iid:
        case Scheme::urn_iid:
            need(1);
            return run_iid(config, columns[0]);
        case Scheme::normal_analytic:
            need(1);
            return run_normal_analytic(config, columns[0]);
        case Scheme::bivariate:
            need(2);
            return run_bivariate(config, columns[0], columns[1]);
        case Scheme::multivariate:
            if (columns.size() < 2)
            {
                need(2);
            }
            return run_multivariate(config, as_matrix(0));
        case Scheme::regression: {
            if (columns.size() < 2)
            {
                need(2);
            }
            Eigen::VectorXd y(static_cast<Eigen::Index>(columns[0].size()));
            for (std::size_t i = 0; i < columns[0].size(); ++i)
            {
                y[static_cast<Eigen::Index>(i)] = columns[0][i];
            }
            return run_regression(config, y, as_matrix(1));
        }
    }
    throw InvalidArgument("unknown scheme");
}

}  // namespace hillpr
