// SPDX-License-Identifier: Apache-2.0
// Shared orchestration of independent runs (private to the library).
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "hillpr/engine.hpp"
#include "hillpr/error.hpp"

namespace hillpr::detail
{

struct RunOutcome
{
    std::vector<double> row;
    std::vector<TrajectoryPoint> trajectory;
    std::size_t jitter_events{0};
    double max_jitter{0};
    double max_refit_delta{0};
    std::size_t refits{0};
    std::optional<MartingaleReport> martingale;
    std::exception_ptr error;
    bool numerical_failure{false};
};

//! Call body(run, outcome) for every run, catching errors per run.
template<class Body>
std::vector<RunOutcome> execute_runs(RunConfig const& config, Body&& body)
{
    std::vector<RunOutcome> outcomes(config.runs);
    auto guarded = [&](std::size_t run) {
        try
        {
            body(run, outcomes[run]);
        }
        catch (NumericalError const&)
        {
            outcomes[run].error = std::current_exception();
            outcomes[run].numerical_failure = true;
        }
        catch (...)
        {
            outcomes[run].error = std::current_exception();
        }
    };

    std::size_t const workers = std::min(std::max<std::size_t>(config.threads, 1),
                                         config.runs);
    if (workers <= 1)
    {
        for (std::size_t run = 0; run < config.runs; ++run)
        {
            guarded(run);
        }
        return outcomes;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&] {
            for (std::size_t run = next++; run < config.runs; run = next++)
            {
                guarded(run);
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
    return outcomes;
}

//! Merge in run order, applying the failed-run policy.
PosteriorDraws merge_runs(RunConfig const& config,
                          std::vector<std::string> names,
                          std::vector<RunOutcome>&& outcomes);

//! Validate runs/horizon against the observed sample size.
void check_run_shape(RunConfig const& config, std::size_t n, bool allow_zero_steps);

}  // namespace hillpr::detail
