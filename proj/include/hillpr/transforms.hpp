// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hillpr
{

//! Bijection between the data scale and the unit interval.
struct TransformSpec
{
    enum class Kind
    {
        identity,
        logit,
        affine,
    };

    Kind kind{Kind::identity};
    double lo{0};
    double hi{1};

    static TransformSpec identity() { return {}; }
    static TransformSpec logit() { return {Kind::logit, 0, 1}; }
    static TransformSpec affine(double lo, double hi);

    //! Parse "identity", "logit" or "affine:lo:hi".
    static TransformSpec parse(std::string_view text);

    std::string to_string() const;

    friend bool operator==(TransformSpec const&, TransformSpec const&) = default;
};

/*!
 * Map a data value into (0, 1).
 *
 * Values that land exactly on 0 or 1 (saturated logistic, affine endpoints,
 * identity data on the boundary) are pulled inward by one representable
 * step and counted in \c clamp_events when it is provided.
 */
double to_unit(TransformSpec const& spec, double x,
               std::size_t* clamp_events = nullptr);
double from_unit(TransformSpec const& spec, double u);

std::vector<double> to_unit(TransformSpec const& spec,
                            std::span<double const> xs,
                            std::size_t* clamp_events = nullptr);

//! Identity if every value is already inside (0, 1), otherwise logistic.
TransformSpec choose_transform(std::span<double const> data);

//! 1-based ranks of distinct values; ties raise TieError.
std::vector<std::size_t> ranks(std::span<double const> data);

//! Normal scores Phi^{-1}(rank / (n + 1)), exactly antisymmetric in rank.
std::vector<double> gaussian_scores(std::span<double const> data);

}  // namespace hillpr
