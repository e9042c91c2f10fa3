// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Test-side reference helpers, independent of the library's geometry code.

#pragma once

#include "plos/citygeom.hpp"
#include "plos/random.hpp"
#include "plos/sim3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plos::testing
{

struct Rect
{
    double x0, y0, x1, y1;
};

/// Slab clip of the segment a + t (b - a), t in [0, 1], against a closed
/// rectangle. Returns the parameter interval inside it.
inline std::optional<std::pair<double, double>> clip_segment(double ax, double ay, double bx, double by,
                                                              const Rect &r)
{
    double t0 = 0.0;
    double t1 = 1.0;
    const double d[2] = {bx - ax, by - ay};
    const double a[2] = {ax, ay};
    const double lo[2] = {r.x0, r.y0};
    const double hi[2] = {r.x1, r.y1};
    for (int k = 0; k < 2; ++k)
    {
        if (d[k] == 0.0)
        {
            if (a[k] < lo[k] || a[k] > hi[k])
                return std::nullopt;
            continue;
        }
        double ta = (lo[k] - a[k]) / d[k];
        double tb = (hi[k] - a[k]) / d[k];
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1)
            return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

/// Footprint of building (ix, iy) computed from first principles.
inline Rect footprint(const citygeom::CityLayout &layout, int ix, int iy)
{
    const double x0 = (ix - 1) * layout.period + layout.s;
    const double y0 = (iy - 1) * layout.period + layout.s;
    return {x0, y0, x0 + layout.w, y0 + layout.w};
}

/// Building under (x, y), from floor arithmetic on the period.
inline std::optional<citygeom::BuildingCell> building_under(const citygeom::CityLayout &layout, double x, double y)
{
    const double P = layout.period;
    const double ox = x - std::floor(x / P) * P;
    const double oy = y - std::floor(y / P) * P;
    if (ox < layout.s || oy < layout.s)
        return std::nullopt;
    return citygeom::BuildingCell{static_cast<int>(std::floor(x / P)) + 1, static_cast<int>(std::floor(y / P)) + 1};
}

/// Random endpoint pair: receiver on free ground at h_rx, UAV at a random
/// point above anything under it. Both stay a margin away from the extent.
inline citygeom::LinkGeometry random_link(const sim3d::City &city, RandomStream &rng, double h_rx, double h_max)
{
    const auto &L = city.layout();
    const double margin = L.period;
    auto pick = [&](double lo, double hi) { return rng.uniform(lo, hi); };
    citygeom::Node rx{};
    for (;;)
    {
        rx = {pick(margin, L.extent_x - margin), pick(margin, L.extent_y - margin), h_rx};
        if (!building_under(L, rx.x, rx.y))
            break;
    }
    citygeom::Node tx{};
    for (;;)
    {
        tx = {pick(margin, L.extent_x - margin), pick(margin, L.extent_y - margin), pick(h_rx + 1.0, h_max)};
        const auto b = building_under(L, tx.x, tx.y);
        if (!b || !city.has_building(b->ix, b->iy) || city.height(b->ix, b->iy) < tx.z)
            break;
    }
    return citygeom::LinkGeometry::between(tx, rx);
}

/// Exhaustive reference: every materialized building whose footprint the
/// ground segment crosses, tested at the footprint point nearest the
/// receiver. Returns the blocker with the smallest distance from the UAV.
inline std::optional<Blocker> exhaustive_blocker(const sim3d::City &city, const citygeom::LinkGeometry &link)
{
    const auto &L = city.layout();
    std::optional<Blocker> best;
    for (int iy = 1; iy <= city.ny(); ++iy)
        for (int ix = 1; ix <= city.nx(); ++ix)
        {
            const auto c = clip_segment(link.tx.x, link.tx.y, link.rx.x, link.rx.y, footprint(L, ix, iy));
            if (!c)
                continue;
            const double r_op = c->second * link.r_rx;
            const double ray = link.tx.z - r_op * (link.tx.z - link.rx.z) / link.r_rx;
            if (city.height(ix, iy) >= ray && (!best || r_op < best->r_op))
                best = Blocker{ix, iy, r_op};
        }
    return best;
}

/// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
template <class Cdf> double ks_statistic(std::vector<double> xs, Cdf cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double f = cdf(xs[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

/// Asymptotic KS critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline std::filesystem::path scratch_dir(const std::string &leaf)
{
    const char *base = std::getenv("PLOS_TEST_TMP");
    std::filesystem::path p = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "plos_tests";
    p /= leaf;
    std::filesystem::create_directories(p);
    return p;
}

} // namespace plos::testing
