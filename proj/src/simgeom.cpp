// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/simgeom.hpp"

#include "plos/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plos::simgeom
{

using citygeom::band_position;

namespace
{

constexpr int kMaxAttempts = 100000;

double draw(const Distribution &d, RandomStream &rng)
{
    if (const auto *f = std::get_if<Fixed>(&d))
        return f->value;
    const auto &u = std::get<UniformRange>(d);
    return rng.uniform(u.lo, u.hi);
}

} // namespace

void validate(const GeomScenario &scenario)
{
    citygeom::validate(scenario.params);
    if (!(scenario.theta > 0.0 && scenario.theta <= 90.0))
        throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, 90]");
    if (!(scenario.h_rx >= 0.0))
        throw Error(ErrorCode::InvalidParams, "receiver height must be non-negative");
    if (const auto *f = std::get_if<Fixed>(&scenario.phi))
    {
        if (!(f->value >= 0.0 && f->value <= 90.0))
            throw Error(ErrorCode::InvalidAngle, "phi must lie in [0, 90]");
    }
    else
    {
        const auto &u = std::get<UniformRange>(scenario.phi);
        if (!(u.lo >= 0.0 && u.hi <= 90.0 && u.hi > u.lo))
            throw Error(ErrorCode::InvalidAngle, "phi range must satisfy 0 <= lo < hi <= 90");
    }
    if (const auto *f = std::get_if<Fixed>(&scenario.h_uav))
    {
        if (!(f->value > scenario.h_rx) || !std::isfinite(f->value))
            throw Error(ErrorCode::InvalidParams, "UAV altitude must exceed the receiver height");
    }
    else
    {
        const auto &u = std::get<UniformRange>(scenario.h_uav);
        if (!(u.lo >= 0.0 && u.hi > u.lo && u.hi > scenario.h_rx) || !std::isfinite(u.hi))
            throw Error(ErrorCode::InvalidParams, "UAV altitude range must satisfy 0 <= lo < hi, hi > h_rx");
    }
}

Node sample_user(const CityLayout &layout, UserZone zone, double h_rx, RandomStream &rng)
{
    const double s = layout.s;
    const double p = layout.period;
    switch (zone)
    {
    case UserZone::Crossroad:
        return {rng.uniform(0.0, s), rng.uniform(0.0, s), h_rx};
    case UserZone::Street:
        return {rng.uniform(0.0, s), rng.uniform(s, p), h_rx};
    case UserZone::FreeSpace:
        break;
    }
    // Areas: crossroad s^2, each street segment s * w.
    const double pick = rng.uniform() * (s * s + 2.0 * s * layout.w);
    const double a = rng.uniform();
    const double b = rng.uniform();
    if (pick < s * s)
        return {a * s, b * s, h_rx};
    if (pick < s * s + s * layout.w)
        return {a * s, s + b * (p - s), h_rx};
    return {s + a * (p - s), b * s, h_rx};
}

std::vector<CandidateOP> candidate_ops(const Node &user, const Node &uav, const CityLayout &layout)
{
    const double dx = uav.x - user.x;
    const double dy = uav.y - user.y;
    const double r = std::hypot(dx, dy);
    std::vector<CandidateOP> ops;
    if (r == 0.0)
        return ops;
    const double tol = 1e-12 * r;
    if (dx < -tol || dy < -tol)
        throw Error(ErrorCode::InvalidQuadrant, "link azimuth outside [0, 90] degrees");

    const double p = layout.period;
    const double s = layout.s;

    // Face lines sit at k * p + s; enumerate k with user < line < uav.
    const auto scan = [&](Face face, double from, double to, double d_along, double other0, double d_other) {
        if (!(d_along > 0.0))
            return;
        const auto k_lo = static_cast<long long>(std::floor((from - s) / p)) + 1;
        const auto k_hi = static_cast<long long>(std::ceil((to - s) / p)) - 1;
        for (long long k = k_lo; k <= k_hi; ++k)
        {
            const double line = static_cast<double>(k) * p + s;
            if (!(line > from && line < to))
                continue;
            const double t = (line - from) / d_along;
            const double other = other0 + t * d_other;
            const auto band = band_position(other, p);
            if (band.offset < s)
                continue; // street gap, no building face here
            CandidateOP op;
            op.face = face;
            op.index = static_cast<int>(k + 1);
            op.r_op = (1.0 - t) * r;
            if (face == Face::X)
            {
                op.x = line;
                op.y = other;
                op.cell = {op.index, static_cast<int>(band.index + 1)};
            }
            else
            {
                op.x = other;
                op.y = line;
                op.cell = {static_cast<int>(band.index + 1), op.index};
            }
            ops.push_back(op);
        }
    };
    scan(Face::X, user.x, uav.x, dx, user.y, dy);
    scan(Face::Y, user.y, uav.y, dy, user.x, dx);

    std::stable_sort(ops.begin(), ops.end(), [](const CandidateOP &a, const CandidateOP &b) { return a.r_op < b.r_op; });
    return ops;
}

LinkTrace trace_link(const GeomScenario &scenario, RandomStream &rng)
{
    validate(scenario);
    const auto layout = citygeom::derive_layout(scenario.params);
    const double gamma = scenario.params.gamma;

    LinkTrace trace;
    std::vector<BuildingCell> seen;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt)
    {
        const Node user = sample_user(layout, scenario.zone, scenario.h_rx, rng);
        const double phi = draw(scenario.phi, rng);
        const double h = draw(scenario.h_uav, rng);
        if (!(h > scenario.h_rx))
        {
            ++trace.rejected;
            continue;
        }
        const Node uav = citygeom::uav_position_from_angles(user, scenario.theta, phi, h);
        const auto ops = candidate_ops(user, uav, layout);
        const auto uav_kind = citygeom::classify_ground(uav.x, uav.y, layout);
        const auto *uav_cell = std::get_if<BuildingCell>(&uav_kind);
        const double r = std::hypot(uav.x - user.x, uav.y - user.y);

        trace.user = user;
        trace.uav = uav;
        trace.candidates = ops.size();
        seen.clear();
        bool inside = false;
        std::optional<Blocker> blocker;
        for (const auto &op : ops)
        {
            if (std::find(seen.begin(), seen.end(), op.cell) != seen.end())
                continue;
            seen.push_back(op.cell);
            const double hb = citygeom::sample_height(gamma, rng);
            ++trace.heights_drawn;
            if (uav_cell && op.cell == *uav_cell && hb >= h)
            {
                inside = true;
                break;
            }
            const double ray = h - op.r_op * (h - scenario.h_rx) / r;
            if (hb >= ray)
            {
                blocker = Blocker{op.cell.ix, op.cell.iy, op.r_op};
                break;
            }
        }
        if (inside)
        {
            ++trace.rejected;
            continue;
        }
        trace.outcome = blocker ? LoSOutcome::nlos(*blocker) : LoSOutcome::los();
        return trace;
    }
    throw Error(ErrorCode::InvalidParams, "could not draw a valid link after " + std::to_string(kMaxAttempts) +
                                              " attempts");
}

LoSOutcome simulate_link(const GeomScenario &scenario, RandomStream &rng)
{
    return trace_link(scenario, rng).outcome;
}

EstimateCost estimate_plos_with_cost(const GeomScenario &scenario, std::uint64_t n_runs, std::uint64_t seed)
{
    if (n_runs == 0)
        throw Error(ErrorCode::InvalidParams, "need at least one run");
    validate(scenario);
    EstimateCost cost;
    std::uint64_t los = 0;
    for (std::uint64_t run = 0; run < n_runs; ++run)
    {
        RandomStream rng(derive_seed(seed, {run}));
        const auto trace = trace_link(scenario, rng);
        cost.heights_drawn += trace.heights_drawn;
        cost.candidates += trace.candidates;
        cost.rejected += trace.rejected;
        if (trace.outcome.is_los())
            ++los;
    }
    cost.estimate = PLosEstimate::from_counts(los, n_runs);
    return cost;
}

PLosEstimate estimate_plos(const GeomScenario &scenario, std::uint64_t n_runs, std::uint64_t seed)
{
    return estimate_plos_with_cost(scenario, n_runs, seed).estimate;
}

} // namespace plos::simgeom
