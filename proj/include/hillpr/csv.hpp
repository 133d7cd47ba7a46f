// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hillpr/engine.hpp"

namespace hillpr
{

struct DatasetFile
{
    std::filesystem::path path;
    bool has_header{false};
};

//! Column-major numeric table.
struct DataTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept
    {
        return columns.empty() ? 0 : columns.front().size();
    }
};

/*!
 * Parse comma-separated finite reals with '.' decimals.
 *
 * Blank lines are skipped. Errors name the 1-based line and column, e.g.
 * "row 3 column 2".
 */
DataTable parse_csv(std::istream& in, bool has_header);
DataTable read_csv(DatasetFile const& file);

//! Number of values that share their value with another in the same column.
std::size_t count_ties(DataTable const& table);

/*!
 * Break ties by perturbing every repeated value by at most
 * 1e-12 * max(1, |x|), deterministically from the seed. Returns the number
 * of perturbed cells.
 */
std::size_t jitter_ties(DataTable& table, std::uint64_t seed);

//! Shortest round-trip decimal form.
std::string format_double(double x);

void write_draws_csv(std::filesystem::path const& path, PosteriorDraws const& draws);
void write_trajectories_csv(std::filesystem::path const& path,
                            PosteriorDraws const& draws);

}  // namespace hillpr
