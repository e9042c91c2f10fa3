// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/citygeom.hpp"

#include "plos/error.hpp"
#include "plos/los.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace plos::citygeom
{

namespace
{

constexpr std::array<NamedEnvironment, 4> kStandard{{
    {"suburban", kSuburban},
    {"urban", kUrban},
    {"dense-urban", kDenseUrban},
    {"high-rise", kHighRise},
}};

std::string describe(const BuiltUpParams &p)
{
    std::ostringstream os;
    os << "(alpha=" << p.alpha << ", beta=" << p.beta << ", gamma=" << p.gamma << ")";
    return os.str();
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

} // namespace

void validate(const BuiltUpParams &params)
{
    // Written as negations so NaN is rejected too.
    if (!(params.alpha > 0.0 && params.alpha < 1.0))
        throw Error(ErrorCode::InvalidParams, "alpha must lie in (0, 1) " + describe(params));
    if (!(params.beta > 0.0) || !std::isfinite(params.beta))
        throw Error(ErrorCode::InvalidParams, "beta must be positive " + describe(params));
    if (!(params.gamma > 0.0) || !std::isfinite(params.gamma))
        throw Error(ErrorCode::InvalidParams, "gamma must be positive " + describe(params));
}

std::span<const NamedEnvironment> standard_environments() { return kStandard; }

std::optional<BuiltUpParams> environment_by_name(std::string_view name)
{
    for (const auto &env : kStandard)
        if (env.name == name)
            return env.params;
    if (name == "ghent")
        return kGhent;
    return std::nullopt;
}

CityLayout derive_layout(const BuiltUpParams &params, double extent_x, double extent_y)
{
    validate(params);
    CityLayout layout;
    layout.period = 1000.0 / std::sqrt(params.beta);
    layout.w = 1000.0 * std::sqrt(params.alpha / params.beta);
    layout.s = layout.period - layout.w;
    if (!(layout.s > 0.0) || !(layout.w > 0.0))
        throw Error(ErrorCode::InvalidParams, "street width must be positive " + describe(params));
    if (!(extent_x >= layout.period) || !(extent_y >= layout.period) || !std::isfinite(extent_x) ||
        !std::isfinite(extent_y))
        throw Error(ErrorCode::InvalidParams, "extent must cover at least one grid period of " +
                                                  std::to_string(layout.period) + " m");
    layout.extent_x = extent_x;
    layout.extent_y = extent_y;
    return layout;
}

CityLayout derive_layout(const BuiltUpParams &params)
{
    validate(params);
    const double period = 1000.0 / std::sqrt(params.beta);
    return derive_layout(params, period, period);
}

double rayleigh_pdf(double h, double gamma)
{
    if (!(gamma > 0.0))
        throw Error(ErrorCode::InvalidParams, "gamma must be positive");
    if (!(h >= 0.0))
        throw Error(ErrorCode::InvalidParams, "height must be non-negative");
    const double g2 = gamma * gamma;
    return h / g2 * std::exp(-h * h / (2.0 * g2));
}

double rayleigh_cdf(double h, double gamma)
{
    if (!(gamma > 0.0))
        throw Error(ErrorCode::InvalidParams, "gamma must be positive");
    if (h <= 0.0)
        return 0.0;
    return -std::expm1(-h * h / (2.0 * gamma * gamma));
}

double rayleigh_from_unit(double u, double gamma)
{
    if (!(u > 0.0 && u <= 1.0))
        throw Error(ErrorCode::InvalidParams, "unit draw must lie in (0, 1]");
    if (!(gamma > 0.0))
        throw Error(ErrorCode::InvalidParams, "gamma must be positive");
    return gamma * std::sqrt(-2.0 * std::log(u));
}

double sample_height(double gamma, RandomStream &rng)
{
    if (!(gamma > 0.0))
        throw Error(ErrorCode::InvalidParams, "gamma must be positive");
    return rayleigh_from_unit(rng.uniform_open_closed(), gamma);
}

LinkGeometry LinkGeometry::between(const Node &tx, const Node &rx)
{
    LinkGeometry link{tx, rx, 0.0, 90.0, 0.0};
    const double dx = tx.x - rx.x;
    const double dy = tx.y - rx.y;
    link.r_rx = std::hypot(dx, dy);
    if (link.r_rx > 0.0)
    {
        link.theta = std::atan2(tx.z - rx.z, link.r_rx) / kDegToRad;
        double phi = std::atan2(dy, dx) / kDegToRad;
        if (phi < 0.0)
            phi += 360.0;
        link.phi = phi;
    }
    return link;
}

BandPosition band_position(double c, double period)
{
    double q = std::floor(c / period);
    double off = c - q * period;
    // c / period may round across an integer; keep offset in [0, period).
    if (off < 0.0)
    {
        off += period;
        q -= 1.0;
    }
    else if (off >= period)
    {
        off -= period;
        q += 1.0;
    }
    return {static_cast<long long>(q), off};
}

bool in_street_band(double c, const CityLayout &layout)
{
    return band_position(c, layout.period).offset < layout.s;
}

CellKind classify_ground(double x, double y, const CityLayout &layout)
{
    const auto bx = band_position(x, layout.period);
    const auto by = band_position(y, layout.period);
    const bool sx = bx.offset < layout.s;
    const bool sy = by.offset < layout.s;
    if (sx && sy)
        return Crossroad{};
    if (sx || sy)
        return Street{};
    return BuildingCell{static_cast<int>(bx.index + 1), static_cast<int>(by.index + 1)};
}

bool inside_extent(double x, double y, const CityLayout &layout)
{
    return x >= 0.0 && x <= layout.extent_x && y >= 0.0 && y <= layout.extent_y;
}

CellKind classify_point(double x, double y, const CityLayout &layout)
{
    if (!inside_extent(x, y, layout))
        throw Error(ErrorCode::OutOfExtent, "point (" + std::to_string(x) + ", " + std::to_string(y) +
                                                ") outside the city extent");
    return classify_ground(x, y, layout);
}

SinCos sincos_degrees(double degrees)
{
    double reduced = std::fmod(degrees, 360.0);
    if (reduced < 0.0)
        reduced += 360.0;
    if (reduced == 0.0)
        return {0.0, 1.0};
    if (reduced == 90.0)
        return {1.0, 0.0};
    if (reduced == 180.0)
        return {0.0, -1.0};
    if (reduced == 270.0)
        return {-1.0, 0.0};
    const double rad = degrees * kDegToRad;
    return {std::sin(rad), std::cos(rad)};
}

Node uav_position_from_angles(const Node &user, double theta, double phi, double h_uav)
{
    if (!(theta > 0.0 && theta <= 90.0))
        throw Error(ErrorCode::InvalidAngle, "theta must lie in (0, 90] degrees, got " + std::to_string(theta));
    if (!(phi >= 0.0 && phi <= 90.0))
        throw Error(ErrorCode::InvalidAngle, "phi must lie in [0, 90] degrees, got " + std::to_string(phi));
    if (!(h_uav > user.z))
        throw Error(ErrorCode::InvalidParams, "UAV altitude must exceed the user height");
    if (theta == 90.0)
        return {user.x, user.y, h_uav};
    const double d = (h_uav - user.z) / std::tan(theta * kDegToRad);
    const auto sc = sincos_degrees(phi);
    return {user.x + d * sc.cos, user.y + d * sc.sin, h_uav};
}

} // namespace plos::citygeom

namespace plos
{

double ray_height_at(const citygeom::LinkGeometry &link, double r_op)
{
    if (!(link.r_rx > 0.0))
        throw Error(ErrorCode::DegenerateLink, "vertical link has no ray slope");
    if (!(r_op >= 0.0 && r_op <= link.r_rx * (1.0 + 1e-12)))
        throw Error(ErrorCode::InvalidParams, "obstruction distance outside [0, r_rx]");
    const double h_u = link.tx.z;
    return h_u - r_op * (h_u - link.rx.z) / link.r_rx;
}

} // namespace plos
