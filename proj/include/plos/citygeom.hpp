// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#pragma once

#include "plos/random.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

namespace plos::citygeom
{

/// Built-up parameters of an environment.
///   alpha: fraction of land covered by buildings, in (0, 1)
///   beta:  buildings per km^2
///   gamma: Rayleigh scale of building heights, meters
struct BuiltUpParams
{
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    bool operator==(const BuiltUpParams &) const = default;
};

/// Throws Error(InvalidParams) unless 0 < alpha < 1, beta > 0, gamma > 0.
void validate(const BuiltUpParams &params);

struct NamedEnvironment
{
    std::string_view name;
    BuiltUpParams params;
};

/// suburban, urban, dense-urban, high-rise.
std::span<const NamedEnvironment> standard_environments();

/// Standard environments plus "ghent".
std::optional<BuiltUpParams> environment_by_name(std::string_view name);

inline constexpr BuiltUpParams kSuburban{0.1, 750.0, 8.0};
inline constexpr BuiltUpParams kUrban{0.3, 500.0, 15.0};
inline constexpr BuiltUpParams kDenseUrban{0.5, 300.0, 20.0};
inline constexpr BuiltUpParams kHighRise{0.5, 300.0, 50.0};
inline constexpr BuiltUpParams kGhent{0.435, 4679.0, 8.8};

inline constexpr double kDefaultRxHeight = 1.5;

/// Grid geometry. Along each axis a street band of width `s` occupies
/// [k*period, k*period + s) and a building band occupies
/// [k*period + s, (k+1)*period). The point (0, 0) is a crossroad corner.
struct CityLayout
{
    double w = 0.0;
    double s = 0.0;
    double period = 0.0;
    double extent_x = 0.0;
    double extent_y = 0.0;

    bool operator==(const CityLayout &) const = default;
};

CityLayout derive_layout(const BuiltUpParams &params, double extent_x, double extent_y);

/// Layout with the minimal one-period extent, for engines that treat the
/// grid as an unbounded plane.
CityLayout derive_layout(const BuiltUpParams &params);

double rayleigh_pdf(double h, double gamma);
double rayleigh_cdf(double h, double gamma);

/// Inverse CDF: gamma * sqrt(-2 ln u) for u in (0, 1].
double rayleigh_from_unit(double u, double gamma);

double sample_height(double gamma, RandomStream &rng);

struct Node
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Node &) const = default;
};

/// Link from a transmitter (UAV) to a receiver (user). Angles in degrees:
/// theta is the elevation seen from rx, phi the azimuth of the rx->tx ground
/// projection from +x, normalized to [0, 360).
struct LinkGeometry
{
    Node tx;
    Node rx;
    double r_rx = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    static LinkGeometry between(const Node &tx, const Node &rx);
};

/// 1-based building indices, ix = floor(x / period) + 1.
struct BuildingCell
{
    int ix = 0;
    int iy = 0;

    auto operator<=>(const BuildingCell &) const = default;
};

struct Street
{
    bool operator==(const Street &) const = default;
};

struct Crossroad
{
    bool operator==(const Crossroad &) const = default;
};

using CellKind = std::variant<BuildingCell, Street, Crossroad>;

/// Offset of coordinate c inside its grid period, in [0, period), together
/// with the period index floor(c / period).
struct BandPosition
{
    long long index;
    double offset;
};

BandPosition band_position(double c, double period);

/// True iff c falls in a street band. A coordinate exactly on the
/// street/building boundary belongs to the building.
bool in_street_band(double c, const CityLayout &layout);

/// Classification on the unbounded grid; no extent check.
CellKind classify_ground(double x, double y, const CityLayout &layout);

/// Throws Error(OutOfExtent) for points outside [0, extent_x] x [0, extent_y].
CellKind classify_point(double x, double y, const CityLayout &layout);

bool inside_extent(double x, double y, const CityLayout &layout);

inline bool is_building(const CellKind &kind) { return std::holds_alternative<BuildingCell>(kind); }

/// cos and sin of an angle in degrees, exact at multiples of 90 degrees.
struct SinCos
{
    double sin;
    double cos;
};

SinCos sincos_degrees(double degrees);

/// UAV position at elevation theta and azimuth phi from `user`, at altitude
/// h_uav. theta in (0, 90], phi in [0, 90], h_uav > user.z.
Node uav_position_from_angles(const Node &user, double theta, double phi, double h_uav);

} // namespace plos::citygeom
