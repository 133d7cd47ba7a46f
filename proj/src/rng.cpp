// SPDX-License-Identifier: Apache-2.0
#include "hillpr/rng.hpp"

#include <cmath>
#include <string>

#include "hillpr/error.hpp"
#include "hillpr/special.hpp"

namespace hillpr
{
namespace
{
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr double kTwoPowMinus53 = 0x1.0p-53;

inline void mulhilo(std::uint32_t a,
                    std::uint32_t b,
                    std::uint32_t& hi,
                    std::uint32_t& lo) noexcept
{
    std::uint64_t const product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}
}  // namespace

std::array<std::uint32_t, 4>
philox4x32(std::array<std::uint32_t, 4> ctr,
           std::array<std::uint32_t, 2> key) noexcept
{
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
    : master_seed_(master_seed), stream_id_(stream_id)
{
    std::uint64_t const key = splitmix64(master_seed);
    key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
}

void RngStream::refill() noexcept
{
    std::array<std::uint32_t, 4> const ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_id_),
        static_cast<std::uint32_t>(stream_id_ >> 32)};
    auto const out = philox4x32(ctr, key_);
    ++counter_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
}

std::uint64_t RngStream::next_u64() noexcept
{
    if (buffered_ == 0)
    {
        this->refill();
    }
    return buffer_[2 - buffered_--];
}

double RngStream::next_uniform() noexcept
{
    return static_cast<double>(this->next_u64() >> 11) * kTwoPowMinus53;
}

double RngStream::next_open_uniform() noexcept
{
    return (static_cast<double>(this->next_u64() >> 11) + 0.5) * kTwoPowMinus53;
}

__extension__ typedef unsigned __int128 Uint128;

std::uint64_t RngStream::next_index(std::uint64_t bound) noexcept
{
    // Lemire's multiply-shift with rejection of the biased low region
    Uint128 product = static_cast<Uint128>(this->next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound)
    {
        std::uint64_t const threshold = (0 - bound) % bound;
        while (low < threshold)
        {
            product = static_cast<Uint128>(this->next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double RngStream::next_standard_normal()
{
    return normal_quantile(Probability{this->next_open_uniform()});
}

double RngStream::next_standard_exponential() noexcept
{
    return -std::log(this->next_open_uniform());
}

void RngStream::skip_blocks(std::uint64_t count) noexcept
{
    counter_ += count;
    buffered_ = 0;
}

std::vector<double> next_dirichlet_uniform(RngStream& stream, std::size_t k)
{
    if (k == 0)
    {
        throw InvalidArgument("Dirichlet dimension must be positive");
    }
    std::vector<double> weights(k);
    double total = 0;
    for (auto& w : weights)
    {
        w = stream.next_standard_exponential();
        total += w;
    }
    for (auto& w : weights)
    {
        w /= total;
    }
    return weights;
}

}  // namespace hillpr
