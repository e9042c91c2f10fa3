// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Full 3D city engine. Every building cell of the extent is materialized with
// a Rayleigh height, and links are decided by checking, for each footprint
// the ground projection crosses, the footprint edge that faces the receiver.

#pragma once

#include "plos/citygeom.hpp"
#include "plos/estimate.hpp"
#include "plos/los.hpp"
#include "plos/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace plos::sim3d
{

using citygeom::BuildingCell;
using citygeom::BuiltUpParams;
using citygeom::CityLayout;
using citygeom::LinkGeometry;
using citygeom::Node;

/// Materialized building grid. Holds floor(extent_x / period) x
/// floor(extent_y / period) complete building cells; the sliver of a cell cut
/// by the extent boundary carries no building.
class City
{
  public:
    /// `heights` is row-major in iy: heights[(iy - 1) * nx + (ix - 1)].
    City(const BuiltUpParams &params, const CityLayout &layout, std::uint64_t seed, std::vector<double> heights);

    const BuiltUpParams &params() const { return params_; }
    const CityLayout &layout() const { return layout_; }
    std::uint64_t seed() const { return seed_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::span<const double> heights() const { return heights_; }

    bool has_building(int ix, int iy) const { return ix >= 1 && iy >= 1 && ix <= nx_ && iy <= ny_; }

    /// Height of building (ix, iy); requires has_building(ix, iy).
    double height(int ix, int iy) const { return heights_[static_cast<std::size_t>(iy - 1) * nx_ + (ix - 1)]; }

    /// The materialized building whose footprint contains (x, y), if any.
    std::optional<BuildingCell> building_at(double x, double y) const;

    bool operator==(const City &) const = default;

  private:
    BuiltUpParams params_;
    CityLayout layout_;
    std::uint64_t seed_ = 0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> heights_;
};

/// Height of cell (ix, iy) in a city generated from `seed`. Each cell has its
/// own stream, so a city can be regenerated or queried cell by cell.
double cell_height(double gamma, std::uint64_t seed, int ix, int iy);

City generate_city(const BuiltUpParams &params, double extent_x, double extent_y, std::uint64_t seed);

/// Flat text: a `# plos-city` header line with params, extent, seed and grid
/// size, then one `ix iy height_m` line per building. Heights use the
/// shortest round-trip decimal form.
void write_city(std::ostream &os, const City &city);
City read_city(std::istream &is);

struct LosTrace
{
    LoSOutcome outcome;
    std::size_t cells_visited = 0;
    std::size_t footprints_tested = 0;
};

/// Edge obstruction-point check with grid traversal and short-circuit.
LosTrace trace_los_edges(const City &city, const LinkGeometry &link);
LoSOutcome check_los_edges(const City &city, const LinkGeometry &link);

enum class DenseSampling
{
    /// Only the lattice k * step and the receiver. Misses obstructions that
    /// lie within step * tan(theta) of the footprint edge.
    Lattice,
    /// Lattice plus both sides of every street/building band transition along
    /// each axis, located by bisection on point classification.
    Refined,
};

/// Brute-force reference: samples the ray every `step` meters of ground
/// distance (plus the receiver) and tests each sample against the building
/// under it. step must lie in (0, s / 10]; the lattice is tightened to
/// w / 4 for very narrow buildings so no band is skipped.
LoSOutcome check_los_dense(const City &city, const LinkGeometry &link, double step,
                           DenseSampling sampling = DenseSampling::Refined);

/// Users on a circle of radius (uav.z - h_rx) / tan(theta) at n uniformly
/// spaced azimuths starting at 0 degrees. Positions inside a footprint or
/// outside the extent are dropped.
std::vector<Node> place_users_circle(const City &city, const Node &uav, double theta, int n, double h_rx);

struct FixedPoint
{
    Node node;
};
struct RandomOverCity
{
    double h = 100.0;
};
struct BuildingTop
{
    double h = 100.0;
};
struct CrossroadCenter
{
    double h = 100.0;
};
struct StreetCenter
{
    double h = 100.0;
};

using UavPlacementPolicy = std::variant<FixedPoint, RandomOverCity, BuildingTop, CrossroadCenter, StreetCenter>;

/// Altitude carried by the policy.
double policy_height(const UavPlacementPolicy &policy);
UavPlacementPolicy with_height(UavPlacementPolicy policy, double h);

/// RandomOverCity redraws positions that would put the UAV inside a building
/// taller than its altitude; BuildingTop chooses only among buildings lower
/// than the altitude.
Node place_uav(const City &city, const UavPlacementPolicy &policy, RandomStream &rng);

/// Monte-Carlo circle protocol: for every run a fresh city, a UAV from the
/// policy, and `users` receivers on the circle for elevation theta. theta = 90
/// puts a single receiver directly below the UAV.
struct CircleProtocol
{
    BuiltUpParams params;
    double extent_x = 3000.0;
    double extent_y = 3000.0;
    UavPlacementPolicy policy = RandomOverCity{100.0};
    double theta = 45.0;
    int users = 360;
    double h_rx = citygeom::kDefaultRxHeight;
};

struct CircleResult
{
    PLosEstimate estimate;
    std::uint64_t runs = 0;
    std::uint64_t links = 0;
    std::uint64_t buildings_generated = 0;
    std::uint64_t cells_visited = 0;
    std::uint64_t footprints_tested = 0;
};

/// Pools LoS counts over all valid receivers of all runs. Run r uses streams
/// derived from (seed, r) only, so different protocol points evaluated with
/// the same seed share cities and UAV positions.
CircleResult run_circle_protocol(const CircleProtocol &protocol, std::uint64_t n_runs, std::uint64_t seed);

} // namespace plos::sim3d
