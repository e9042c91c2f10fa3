// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace plos
{

/// splitmix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent child seed from a parent seed and a list of labels
/// (run index, cell coordinates, ...). Pure function of its inputs.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) noexcept;

/// Maps 64 random bits to a double in (0, 1], with 53 bits of resolution.
double unit_open_closed(std::uint64_t bits) noexcept;

/// Maps 64 random bits to a double in [0, 1), with 53 bits of resolution.
double unit_closed_open(std::uint64_t bits) noexcept;

/// A seeded, platform-independent random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard; the
/// conversions to doubles and indices are done here rather than through the
/// implementation-defined std distributions so results are bit-identical
/// across standard libraries.
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return unit_closed_open(engine_()); }

    /// Uniform in (0, 1].
    double uniform_open_closed() { return unit_open_closed(engine_()); }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive and below 2^53.
    std::uint64_t index(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
};

} // namespace plos
