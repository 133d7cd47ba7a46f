// SPDX-License-Identifier: Apache-2.0
#include "hillpr/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "hillpr/error.hpp"
#include "hillpr/rng.hpp"

namespace hillpr
{
namespace
{
std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true)
    {
        auto const comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
        {
            return cells;
        }
        start = comma + 1;
    }
}

// Tie-breaking streams live far away from run stream ids.
constexpr std::uint64_t kJitterStreamBase = 0xA11CE00000000000ull;
}  // namespace

DataTable parse_csv(std::istream& in, bool has_header)
{
    DataTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
        {
            continue;
        }
        auto const cells = split(line);
        if (header_pending)
        {
            for (auto cell : cells)
            {
                table.header.emplace_back(cell);
            }
            table.columns.resize(cells.size());
            header_pending = false;
            continue;
        }
        if (table.columns.empty())
        {
            table.columns.resize(cells.size());
        }
        if (cells.size() != table.columns.size())
        {
            throw ParseError("row " + std::to_string(line_no) + ": expected "
                             + std::to_string(table.columns.size())
                             + " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c)
        {
            double value = 0;
            auto const cell = cells[c];
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()
                || !std::isfinite(value))
            {
                throw ParseError("non-numeric cell '" + std::string(cell) + "' at row "
                                 + std::to_string(line_no) + " column "
                                 + std::to_string(c + 1));
            }
            table.columns[c].push_back(value);
        }
    }
    if (table.rows() == 0)
    {
        throw ParseError("no data rows");
    }
    return table;
}

DataTable read_csv(DatasetFile const& file)
{
    std::ifstream in(file.path);
    if (!in)
    {
        throw IoError("cannot open '" + file.path.string() + "'");
    }
    return parse_csv(in, file.has_header);
}

std::size_t count_ties(DataTable const& table)
{
    std::size_t tied = 0;
    for (auto const& column : table.columns)
    {
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();)
        {
            std::size_t j = i + 1;
            while (j < sorted.size() && sorted[j] == sorted[i])
            {
                ++j;
            }
            if (j - i > 1)
            {
                tied += j - i;
            }
            i = j;
        }
    }
    return tied;
}

std::size_t jitter_ties(DataTable& table, std::uint64_t seed)
{
    std::size_t perturbed = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
    {
        auto& column = table.columns[c];
        RngStream stream(seed, kJitterStreamBase + c);
        for (int pass = 0; pass < 16; ++pass)
        {
            std::vector<std::size_t> order(column.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
                return column[a] < column[b];
            });
            bool any = false;
            for (std::size_t i = 1; i < order.size(); ++i)
            {
                if (column[order[i]] == column[order[i - 1]])
                {
                    double& x = column[order[i]];
                    double const scale = 1e-12 * std::max(1.0, std::abs(x));
                    x += scale * (2 * stream.next_open_uniform() - 1);
                    ++perturbed;
                    any = true;
                }
            }
            if (!any)
            {
                break;
            }
        }
    }
    return perturbed;
}

std::string format_double(double x)
{
    char buf[40];
    auto const res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_draws_csv(std::filesystem::path const& path, PosteriorDraws const& draws)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw IoError("cannot write '" + path.string() + "'");
    }
    for (std::size_t k = 0; k < draws.names.size(); ++k)
    {
        out << (k ? "," : "") << draws.names[k];
    }
    out << '\n';
    for (auto const& row : draws.rows)
    {
        for (std::size_t k = 0; k < row.size(); ++k)
        {
            out << (k ? "," : "") << format_double(row[k]);
        }
        out << '\n';
    }
    if (!out)
    {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void write_trajectories_csv(std::filesystem::path const& path,
                            PosteriorDraws const& draws)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << "run,step";
    for (auto const& name : draws.names)
    {
        out << ',' << name;
    }
    out << '\n';
    for (auto const& point : draws.trajectories)
    {
        out << point.run << ',' << point.step;
        for (double v : point.values)
        {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
    if (!out)
    {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

}  // namespace hillpr
