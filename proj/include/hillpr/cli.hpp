// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/cli.hpp
 * \brief Command-line parsing, data ingest and output writing.
 */
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hillpr/csv.hpp"
#include "hillpr/engine.hpp"

namespace hillpr
{

struct CliOptions
{
    std::string command;
    RunConfig config;
    std::optional<DatasetFile> data;
    std::filesystem::path out_dir{"hillpr_out"};
    bool jitter_ties{false};
    //! Expected column count for multivariate input.
    std::optional<std::size_t> dims;
    //! Size of the synthetic N(0,1) sample used by normal-check without data.
    std::size_t synthetic_n{50};
    bool color{true};

    //! Fully explicit argument list that reproduces this configuration.
    std::vector<std::string> canonical_args() const;
};

//! Raised by parse_args for --help; carries the rendered help text.
struct HelpRequested
{
    std::string text;
};

//! Parse arguments after the program name. Throws UsageError.
CliOptions parse_args(std::vector<std::string> const& args);

/*!
 * Load, check and lay out input columns for the configured scheme.
 *
 * Throws UsageError when the column count does not fit the scheme. Tied
 * values are counted in \c tied and broken only if jitter_ties is set.
 */
std::vector<std::vector<double>>
load_columns(CliOptions const& options, std::size_t& tied, std::size_t& jittered);

//! Write draws.csv, summary.json and (if recorded) trajectories.csv.
void write_outputs(CliOptions const& options,
                   PosteriorDraws const& draws,
                   std::size_t rows_read,
                   std::size_t tied,
                   std::size_t jittered);

//! Returns the process exit code: 0 success, 1 runtime failure, 2 usage.
int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace hillpr
