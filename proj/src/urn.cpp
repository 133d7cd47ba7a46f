// SPDX-License-Identifier: Apache-2.0
#include "hillpr/urn.hpp"

#include <algorithm>

#include "hillpr/error.hpp"

namespace hillpr
{

UrnState::UrnState(std::span<double const> values)
{
    balls_.reserve(values.size());
    for (double x : values)
    {
        this->insert(x);
    }
}

std::size_t UrnState::sample_atom(RngStream& stream) const
{
    if (balls_.empty())
    {
        throw StateError("cannot draw from an empty urn");
    }
    return balls_[stream.next_index(balls_.size())];
}

double UrnState::sample_next(RngStream& stream) const
{
    return atoms_[this->sample_atom(stream)];
}

void UrnState::insert_atom(std::size_t i)
{
    if (i >= atoms_.size())
    {
        throw InvalidArgument("urn atom index out of range");
    }
    ++counts_[i];
    balls_.push_back(i);
}

void UrnState::insert(double x)
{
    auto it = std::find(atoms_.begin(), atoms_.end(), x);
    if (it == atoms_.end())
    {
        atoms_.push_back(x);
        counts_.push_back(0);
        it = atoms_.end() - 1;
    }
    this->insert_atom(static_cast<std::size_t>(it - atoms_.begin()));
}

}  // namespace hillpr
