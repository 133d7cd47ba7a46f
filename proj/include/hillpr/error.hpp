// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hillpr
{

enum class ErrorKind
{
    invalid_argument,
    domain,
    tie,
    state,
    degeneracy,
    numerical,
    inversion,
    usage,
    parse,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

//! Base of every error raised by the library; carries a machine-readable kind.
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

#define HILLPR_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error                                                  \
    {                                                                          \
      public:                                                                  \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) \
        {                                                                      \
        }                                                                      \
    }

HILLPR_DEFINE_ERROR(InvalidArgument, invalid_argument);
HILLPR_DEFINE_ERROR(DomainError, domain);
HILLPR_DEFINE_ERROR(TieError, tie);
HILLPR_DEFINE_ERROR(StateError, state);
HILLPR_DEFINE_ERROR(DegeneracyError, degeneracy);
HILLPR_DEFINE_ERROR(NumericalError, numerical);
HILLPR_DEFINE_ERROR(InversionError, inversion);
HILLPR_DEFINE_ERROR(UsageError, usage);
HILLPR_DEFINE_ERROR(ParseError, parse);
HILLPR_DEFINE_ERROR(IoError, io);

#undef HILLPR_DEFINE_ERROR

}  // namespace hillpr
