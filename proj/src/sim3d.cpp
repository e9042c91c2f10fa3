// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/sim3d.hpp"

#include "plos/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace plos::sim3d
{

using citygeom::band_position;
using citygeom::classify_ground;

City::City(const BuiltUpParams &params, const CityLayout &layout, std::uint64_t seed, std::vector<double> heights)
    : params_(params), layout_(layout), seed_(seed),
      nx_(static_cast<int>(std::floor(layout.extent_x / layout.period))),
      ny_(static_cast<int>(std::floor(layout.extent_y / layout.period))), heights_(std::move(heights))
{
    if (heights_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_))
        throw Error(ErrorCode::InvalidParams, "height grid must hold " + std::to_string(nx_) + " x " +
                                                  std::to_string(ny_) + " entries, got " +
                                                  std::to_string(heights_.size()));
    for (double h : heights_)
        if (!(h >= 0.0) || !std::isfinite(h))
            throw Error(ErrorCode::InvalidParams, "building heights must be finite and non-negative");
}

std::optional<BuildingCell> City::building_at(double x, double y) const
{
    const auto kind = classify_ground(x, y, layout_);
    if (const auto *cell = std::get_if<BuildingCell>(&kind); cell && has_building(cell->ix, cell->iy))
        return *cell;
    return std::nullopt;
}

double cell_height(double gamma, std::uint64_t seed, int ix, int iy)
{
    const auto bits = derive_seed(seed, {static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)});
    return citygeom::rayleigh_from_unit(unit_open_closed(bits), gamma);
}

City generate_city(const BuiltUpParams &params, double extent_x, double extent_y, std::uint64_t seed)
{
    const auto layout = citygeom::derive_layout(params, extent_x, extent_y);
    const int nx = static_cast<int>(std::floor(extent_x / layout.period));
    const int ny = static_cast<int>(std::floor(extent_y / layout.period));
    std::vector<double> heights;
    heights.reserve(static_cast<std::size_t>(nx) * ny);
    for (int iy = 1; iy <= ny; ++iy)
        for (int ix = 1; ix <= nx; ++ix)
            heights.push_back(cell_height(params.gamma, seed, ix, iy));
    return City(params, layout, seed, std::move(heights));
}

namespace
{

void require_in_extent(const Node &n, const CityLayout &layout, const char *which)
{
    if (!citygeom::inside_extent(n.x, n.y, layout))
        throw Error(ErrorCode::OutOfExtent, std::string(which) + " outside the city extent");
    if (!(n.z >= 0.0))
        throw Error(ErrorCode::InvalidParams, std::string(which) + " below ground");
}

void require_outside_volume(const City &city, const Node &n, const char *which)
{
    if (const auto cell = city.building_at(n.x, n.y); cell && n.z <= city.height(cell->ix, cell->iy))
        throw Error(ErrorCode::EndpointInsideBuilding, std::string(which) + " inside building (" +
                                                           std::to_string(cell->ix) + ", " +
                                                           std::to_string(cell->iy) + ")");
}

// Handles the r_rx = 0 case shared by both checks. Returns nullopt for a
// regular link.
std::optional<LoSOutcome> validate_link(const City &city, const LinkGeometry &link)
{
    require_in_extent(link.tx, city.layout(), "transmitter");
    require_in_extent(link.rx, city.layout(), "receiver");
    if (link.r_rx > 0.0)
    {
        require_outside_volume(city, link.tx, "transmitter");
        require_outside_volume(city, link.rx, "receiver");
        return std::nullopt;
    }
    if (const auto cell = city.building_at(link.tx.x, link.tx.y))
    {
        const double h = city.height(cell->ix, cell->iy);
        if (h >= link.tx.z)
            return LoSOutcome::nlos({cell->ix, cell->iy, 0.0});
        if (link.rx.z <= h)
            throw Error(ErrorCode::EndpointInsideBuilding, "receiver inside building below the UAV");
    }
    return LoSOutcome::los();
}

// Liang-Barsky clip of p(t) = a + t * d, t in [0, 1], against [lo, hi).
// Axis-parallel segments use the half-open membership of the grid bands.
bool clip_axis(double a, double d, double lo, double hi, double &t0, double &t1)
{
    if (d == 0.0)
        return a >= lo && a < hi;
    double ta = (lo - a) / d;
    double tb = (hi - a) / d;
    if (ta > tb)
        std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    return t0 < t1;
}

} // namespace

LosTrace trace_los_edges(const City &city, const LinkGeometry &link)
{
    LosTrace trace;
    if (auto vertical = validate_link(city, link))
    {
        trace.outcome = *vertical;
        trace.cells_visited = 1;
        return trace;
    }

    const auto &layout = city.layout();
    const double period = layout.period;
    const double x0 = link.tx.x, y0 = link.tx.y;
    const double dx = link.rx.x - x0, dy = link.rx.y - y0;
    const double slope = (link.tx.z - link.rx.z) / link.r_rx;

    auto bx = band_position(x0, period).index;
    auto by = band_position(y0, period).index;
    const auto bx_end = band_position(link.rx.x, period).index;
    const auto by_end = band_position(link.rx.y, period).index;
    const int step_x = dx > 0.0 ? 1 : -1;
    const int step_y = dy > 0.0 ? 1 : -1;
    long long remaining_x = std::llabs(bx_end - bx);
    long long remaining_y = std::llabs(by_end - by);

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double tdelta_x = dx != 0.0 ? period / std::abs(dx) : inf;
    const double tdelta_y = dy != 0.0 ? period / std::abs(dy) : inf;
    double tmax_x = dx != 0.0 ? ((static_cast<double>(bx) + (dx > 0.0 ? 1.0 : 0.0)) * period - x0) / dx : inf;
    double tmax_y = dy != 0.0 ? ((static_cast<double>(by) + (dy > 0.0 ? 1.0 : 0.0)) * period - y0) / dy : inf;

    while (true)
    {
        ++trace.cells_visited;
        const int ix = static_cast<int>(bx + 1);
        const int iy = static_cast<int>(by + 1);
        if (city.has_building(ix, iy))
        {
            const double fx = static_cast<double>(bx) * period + layout.s;
            const double fy = static_cast<double>(by) * period + layout.s;
            double t0 = 0.0, t1 = 1.0;
            if (clip_axis(x0, dx, fx, fx + layout.w, t0, t1) && clip_axis(y0, dy, fy, fy + layout.w, t0, t1))
            {
                ++trace.footprints_tested;
                // Ray height falls toward the receiver, so the footprint's
                // lowest ray point is where the segment leaves it.
                const double r_op = t1 * link.r_rx;
                const double ray = link.tx.z - r_op * slope;
                if (city.height(ix, iy) >= ray)
                {
                    trace.outcome = LoSOutcome::nlos({ix, iy, r_op});
                    return trace;
                }
            }
        }
        if (remaining_x == 0 && remaining_y == 0)
            break;
        const bool advance_x = remaining_y == 0 || (remaining_x > 0 && tmax_x < tmax_y);
        if (advance_x)
        {
            bx += step_x;
            tmax_x += tdelta_x;
            --remaining_x;
        }
        else
        {
            by += step_y;
            tmax_y += tdelta_y;
            --remaining_y;
        }
    }
    trace.outcome = LoSOutcome::los();
    return trace;
}

LoSOutcome check_los_edges(const City &city, const LinkGeometry &link)
{
    return trace_los_edges(city, link).outcome;
}

LoSOutcome check_los_dense(const City &city, const LinkGeometry &link, double step, DenseSampling sampling)
{
    const auto &layout = city.layout();
    if (!(step > 0.0) || step > layout.s / 10.0)
        throw Error(ErrorCode::InvalidParams, "dense step must lie in (0, s/10]");
    if (auto vertical = validate_link(city, link))
        return *vertical;

    const double r_rx = link.r_rx;
    const auto point_at = [&](double r) {
        const double t = r / r_rx;
        return std::pair{link.tx.x + t * (link.rx.x - link.tx.x), link.tx.y + t * (link.rx.y - link.tx.y)};
    };
    const auto test = [&](double r) -> std::optional<LoSOutcome> {
        const auto [x, y] = point_at(r);
        if (const auto cell = city.building_at(x, y))
        {
            const double ray = link.tx.z - r * (link.tx.z - link.rx.z) / r_rx;
            if (city.height(cell->ix, cell->iy) >= ray)
                return LoSOutcome::nlos({cell->ix, cell->iy, r});
        }
        return std::nullopt;
    };

    // Band state of one coordinate: period index and street/building flag.
    const auto band_state = [&](double c) {
        const auto b = band_position(c, layout.period);
        return std::pair{b.index, b.offset < layout.s};
    };
    const auto x_state = [&](double r) { return band_state(point_at(r).first); };
    const auto y_state = [&](double r) { return band_state(point_at(r).second); };

    // Tests both sides of the transition of `state` inside [a, b].
    const auto refine = [&](auto state, double a, double b) -> std::optional<LoSOutcome> {
        const auto sa = state(a);
        if (state(b) == sa)
            return std::nullopt;
        for (int i = 0; i < 200 && b - a > 1e-12 * (1.0 + b); ++i)
        {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b)
                break;
            (state(mid) == sa ? a : b) = mid;
        }
        if (auto hit = test(a))
            return hit;
        return test(b);
    };

    const double lattice = std::min(step, layout.w / 4.0);
    const auto n = static_cast<std::uint64_t>(std::floor(r_rx / lattice));
    double prev = 0.0;
    for (std::uint64_t k = 0; k <= n + 1; ++k)
    {
        const double r = k <= n ? static_cast<double>(k) * lattice : r_rx;
        if (auto hit = test(r))
            return *hit;
        if (sampling == DenseSampling::Refined && k > 0)
        {
            if (auto hit = refine(x_state, prev, r))
                return *hit;
            if (auto hit = refine(y_state, prev, r))
                return *hit;
        }
        prev = r;
    }
    return LoSOutcome::los();
}

std::vector<Node> place_users_circle(const City &city, const Node &uav, double theta, int n, double h_rx)
{
    if (n < 1)
        throw Error(ErrorCode::InvalidParams, "need at least one user");
    if (!(theta > 0.0 && theta < 90.0))
        throw Error(ErrorCode::InvalidAngle, "circle placement needs theta in (0, 90)");
    if (!(uav.z > h_rx))
        throw Error(ErrorCode::InvalidParams, "UAV must fly above the receivers");
    const double d = (uav.z - h_rx) / std::tan(theta * std::numbers::pi / 180.0);
    if (!(d > 0.0))
        throw Error(ErrorCode::DegenerateCircle, "zero circle radius");

    const auto &layout = city.layout();
    std::vector<Node> users;
    users.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
    {
        const auto sc = citygeom::sincos_degrees(360.0 * k / n);
        const Node p{uav.x + d * sc.cos, uav.y + d * sc.sin, h_rx};
        if (!citygeom::inside_extent(p.x, p.y, layout))
            continue;
        if (citygeom::is_building(classify_ground(p.x, p.y, layout)))
            continue;
        users.push_back(p);
    }
    return users;
}

double policy_height(const UavPlacementPolicy &policy)
{
    return std::visit(
        [](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FixedPoint>)
                return p.node.z;
            else
                return p.h;
        },
        policy);
}

UavPlacementPolicy with_height(UavPlacementPolicy policy, double h)
{
    std::visit(
        [h](auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FixedPoint>)
                p.node.z = h;
            else
                p.h = h;
        },
        policy);
    return policy;
}

namespace
{

constexpr int kMaxPlacementAttempts = 100000;

// Number of lattice points offset + k * period (k >= 0) within [0, extent].
long long lattice_count(double offset, double period, double extent)
{
    if (offset > extent)
        return 0;
    return static_cast<long long>(std::floor((extent - offset) / period)) + 1;
}

Node pick_lattice(const CityLayout &layout, double ox, double oy, long long nx, std::uint64_t idx, double h)
{
    const auto kx = static_cast<long long>(idx % static_cast<std::uint64_t>(nx));
    const auto ky = static_cast<long long>(idx / static_cast<std::uint64_t>(nx));
    return {ox + static_cast<double>(kx) * layout.period, oy + static_cast<double>(ky) * layout.period, h};
}

void require_altitude(double h)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw Error(ErrorCode::InvalidParams, "UAV altitude must be positive");
}

} // namespace

Node place_uav(const City &city, const UavPlacementPolicy &policy, RandomStream &rng)
{
    const auto &layout = city.layout();
    const double half_s = layout.s / 2.0;
    const double mid_w = layout.s + layout.w / 2.0;

    if (const auto *fixed = std::get_if<FixedPoint>(&policy))
        return fixed->node;

    if (const auto *random = std::get_if<RandomOverCity>(&policy))
    {
        require_altitude(random->h);
        for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt)
        {
            const Node p{rng.uniform(0.0, layout.extent_x), rng.uniform(0.0, layout.extent_y), random->h};
            const auto cell = city.building_at(p.x, p.y);
            if (!cell || city.height(cell->ix, cell->iy) < random->h)
                return p;
        }
        throw Error(ErrorCode::NoSuchCell, "no position found above the buildings");
    }

    if (const auto *top = std::get_if<BuildingTop>(&policy))
    {
        require_altitude(top->h);
        std::vector<std::size_t> eligible;
        const auto heights = city.heights();
        for (std::size_t i = 0; i < heights.size(); ++i)
            if (heights[i] < top->h)
                eligible.push_back(i);
        if (eligible.empty())
            throw Error(ErrorCode::NoSuchCell, "no building lower than the UAV altitude");
        const auto i = eligible[rng.index(eligible.size())];
        const auto nx = static_cast<std::size_t>(city.nx());
        return {static_cast<double>(i % nx) * layout.period + mid_w,
                static_cast<double>(i / nx) * layout.period + mid_w, top->h};
    }

    if (const auto *cross = std::get_if<CrossroadCenter>(&policy))
    {
        require_altitude(cross->h);
        const auto nx = lattice_count(half_s, layout.period, layout.extent_x);
        const auto ny = lattice_count(half_s, layout.period, layout.extent_y);
        if (nx == 0 || ny == 0)
            throw Error(ErrorCode::NoSuchCell, "no crossroad inside the extent");
        const auto idx = rng.index(static_cast<std::uint64_t>(nx * ny));
        return pick_lattice(layout, half_s, half_s, nx, idx, cross->h);
    }

    const auto &street = std::get<StreetCenter>(policy);
    require_altitude(street.h);
    // Segments running along x (center (s + w/2, s/2)) and along y.
    const auto ax = lattice_count(mid_w, layout.period, layout.extent_x);
    const auto ay = lattice_count(half_s, layout.period, layout.extent_y);
    const auto bx = lattice_count(half_s, layout.period, layout.extent_x);
    const auto by = lattice_count(mid_w, layout.period, layout.extent_y);
    const auto na = static_cast<std::uint64_t>(ax * ay);
    const auto nb = static_cast<std::uint64_t>(bx * by);
    if (na + nb == 0)
        throw Error(ErrorCode::NoSuchCell, "no street segment inside the extent");
    const auto idx = rng.index(na + nb);
    if (idx < na)
        return pick_lattice(layout, mid_w, half_s, ax, idx, street.h);
    return pick_lattice(layout, half_s, mid_w, bx, idx - na, street.h);
}

CircleResult run_circle_protocol(const CircleProtocol &protocol, std::uint64_t n_runs, std::uint64_t seed)
{
    if (n_runs == 0)
        throw Error(ErrorCode::InvalidParams, "need at least one run");
    if (!(protocol.theta > 0.0 && protocol.theta <= 90.0))
        throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, 90]");

    CircleResult result;
    std::uint64_t los = 0;
    for (std::uint64_t run = 0; run < n_runs; ++run)
    {
        const auto run_seed = derive_seed(seed, {run});
        const City city = generate_city(protocol.params, protocol.extent_x, protocol.extent_y, derive_seed(run_seed, {0}));
        result.buildings_generated += city.heights().size();
        RandomStream rng(derive_seed(run_seed, {1}));
        const Node uav = place_uav(city, protocol.policy, rng);

        std::vector<Node> users;
        if (protocol.theta == 90.0)
        {
            const Node below{uav.x, uav.y, protocol.h_rx};
            if (citygeom::inside_extent(below.x, below.y, city.layout()) &&
                !citygeom::is_building(classify_ground(below.x, below.y, city.layout())))
                users.push_back(below);
        }
        else
        {
            users = place_users_circle(city, uav, protocol.theta, protocol.users, protocol.h_rx);
        }

        for (const auto &user : users)
        {
            const auto trace = trace_los_edges(city, LinkGeometry::between(uav, user));
            result.cells_visited += trace.cells_visited;
            result.footprints_tested += trace.footprints_tested;
            if (trace.outcome.is_los())
                ++los;
        }
        result.links += users.size();
        ++result.runs;
    }
    if (result.links == 0)
        throw Error(ErrorCode::NoSuchCell, "no receiver position fell inside free space");
    result.estimate = PLosEstimate::from_counts(los, result.links);
    return result;
}

} // namespace plos::sim3d
