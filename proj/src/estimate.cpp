// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/estimate.hpp"

#include "plos/error.hpp"

#include <algorithm>
#include <cmath>

namespace plos
{

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z)
{
    if (n == 0 || k > n)
        throw Error(ErrorCode::InvalidCounts, "need 0 <= k <= n and n >= 1");
    if (!(z > 0.0))
        throw Error(ErrorCode::InvalidCounts, "z must be positive");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    double lo = std::clamp(center - half, 0.0, 1.0);
    double hi = std::clamp(center + half, 0.0, 1.0);
    // Rounding at the boundaries must not leave p outside its own interval.
    lo = std::min(lo, p);
    hi = std::max(hi, p);
    if (k == 0)
        lo = 0.0;
    if (k == n)
        hi = 1.0;
    return {lo, hi};
}

PLosEstimate PLosEstimate::from_counts(std::uint64_t k, std::uint64_t n, double z)
{
    const auto [lo, hi] = wilson_interval(k, n, z);
    return {n, k, static_cast<double>(k) / static_cast<double>(n), lo, hi, false};
}

PLosEstimate PLosEstimate::exact(double p)
{
    return {1, 0, p, p, p, true};
}

} // namespace plos
