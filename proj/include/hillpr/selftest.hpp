// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hillpr
{

struct CheckResult
{
    std::string name;
    bool passed{false};
    std::string detail;
};

//! Stream id reserved for synthetic input data.
inline constexpr std::uint64_t kSyntheticDataStream = 0xDA7A000000000000ull;

//! n standard normal values from the reserved data stream.
std::vector<double> synthetic_normal_data(std::uint64_t seed, std::size_t n);

/*!
 * Draw X_{n+1} many times from one Hill state on n = 20 uniform points and
 * check every gap frequency is within 3 standard errors of 1/(n+1).
 */
CheckResult check_interval_uniformity(std::uint64_t seed,
                                      std::size_t draws = 100000);

/*!
 * Forward-simulate the normal model from n = 50 synthetic points to
 * N = 1000 and compare the terminal draw with its closed-form law:
 * variance within 2% and mean within 3 Monte Carlo standard errors.
 */
CheckResult check_normal_analytic(std::uint64_t seed, std::size_t runs = 10000);

std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace hillpr
