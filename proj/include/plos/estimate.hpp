// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#pragma once

#include <cstdint>
#include <utility>

namespace plos
{

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for k successes in n trials, clamped to [0, 1].
/// Throws Error(InvalidCounts) unless 0 <= k <= n, n >= 1, z > 0.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ95);

/// Monte-Carlo estimate of P_LoS. Closed-form rows (baseline models) carry
/// n = 1, k = 0 and a degenerate interval at p_hat.
struct PLosEstimate
{
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    bool closed_form = false;

    static PLosEstimate from_counts(std::uint64_t k, std::uint64_t n, double z = kZ95);
    static PLosEstimate exact(double p);

    /// True when the two 95% intervals intersect.
    bool overlaps(const PLosEstimate &other) const { return ci_lo <= other.ci_hi && other.ci_lo <= ci_hi; }

    bool operator==(const PLosEstimate &) const = default;
};

} // namespace plos
