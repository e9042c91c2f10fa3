// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/random.hpp"

namespace plos
{

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) noexcept
{
    std::uint64_t h = mix64(seed);
    for (std::uint64_t label : labels)
        h = mix64(h ^ mix64(label + 0x632be59bd9b4e019ULL));
    return h;
}

double unit_open_closed(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double unit_closed_open(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::index(std::uint64_t n)
{
    // 53-bit scaling; adequate for the index ranges used here (n << 2^53).
    const auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

} // namespace plos
