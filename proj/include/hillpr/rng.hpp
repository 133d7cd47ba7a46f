// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/rng.hpp
 * \brief Counter-based random streams and primitive variates.
 *
 * Each stream is a Philox4x32-10 keyed by a hash of the master seed, with
 * the upper 64 bits of the 128-bit counter holding the stream id. Streams
 * with different ids therefore walk disjoint counter ranges, and any stream
 * can be reconstructed from (master_seed, stream_id) alone.
 */
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hillpr
{

//! One round-reduced block cipher evaluation: 128-bit counter -> 128 bits.
std::array<std::uint32_t, 4>
philox4x32(std::array<std::uint32_t, 4> counter,
           std::array<std::uint32_t, 2> key) noexcept;

//! SplitMix64 finalizer, used to spread user seeds over the key space.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

class RngStream
{
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    //! Number of 128-bit blocks consumed so far.
    std::uint64_t block_counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    //! Uniform on [0, 1) with 53 bits of resolution.
    double next_uniform() noexcept;
    //! Uniform on the open interval (0, 1): midpoints of the 2^-53 grid.
    double next_open_uniform() noexcept;
    //! Uniform integer on [0, bound); bound must be positive.
    std::uint64_t next_index(std::uint64_t bound) noexcept;

    //! Standard normal by inversion of the normal CDF.
    double next_standard_normal();
    double next_standard_exponential() noexcept;

    //! Skip ahead by a number of 128-bit blocks without generating them.
    void skip_blocks(std::uint64_t count) noexcept;

  private:
    void refill() noexcept;

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::array<std::uint32_t, 2> key_;
    std::uint64_t counter_{0};
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_{0};
};

//! Flat Dirichlet(1, ..., 1) weights as normalized standard exponentials.
std::vector<double> next_dirichlet_uniform(RngStream& stream, std::size_t k);

}  // namespace hillpr
