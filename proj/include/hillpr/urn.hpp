// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hillpr/rng.hpp"

namespace hillpr
{

/*!
 * Polya urn over a multiset of reals.
 *
 * Every draw returns one of the current balls uniformly and the caller puts
 * it back with a copy, so the support never grows beyond the initial atoms
 * unless new values are inserted explicitly.
 */
class UrnState
{
  public:
    UrnState() = default;
    explicit UrnState(std::span<double const> values);

    std::size_t total() const noexcept { return balls_.size(); }
    std::size_t atom_count() const noexcept { return atoms_.size(); }
    double atom(std::size_t i) const { return atoms_[i]; }
    std::size_t count(std::size_t i) const { return counts_[i]; }

    //! Index of the atom drawn uniformly over balls.
    std::size_t sample_atom(RngStream& stream) const;
    double sample_next(RngStream& stream) const;

    //! Add one ball of an existing atom.
    void insert_atom(std::size_t i);
    //! Add one ball of value x, creating a new atom if it is not present.
    void insert(double x);

  private:
    std::vector<double> atoms_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> balls_;
};

}  // namespace hillpr
