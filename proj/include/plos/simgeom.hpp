// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Geometry-based engine. No city is materialized: a user is placed near one
// crossroad, the UAV is placed from (theta, phi, h_uav), and building heights
// are drawn only for the buildings whose user-facing faces the link crosses.

#pragma once

#include "plos/citygeom.hpp"
#include "plos/estimate.hpp"
#include "plos/los.hpp"
#include "plos/random.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace plos::simgeom
{

using citygeom::BuildingCell;
using citygeom::BuiltUpParams;
using citygeom::CityLayout;
using citygeom::Node;

/// Street: the street segment x in [0, s), y in [s, period), running along y.
/// Crossroad: [0, s) x [0, s).
/// FreeSpace: area-weighted mixture of the crossroad and both adjacent street
/// segments, i.e. uniform over the free space of one grid period.
enum class UserZone
{
    Street,
    Crossroad,
    FreeSpace,
};

struct Fixed
{
    double value = 0.0;
};

struct UniformRange
{
    double lo = 0.0;
    double hi = 0.0;
};

using Distribution = std::variant<Fixed, UniformRange>;

struct GeomScenario
{
    BuiltUpParams params;
    UserZone zone = UserZone::FreeSpace;
    double theta = 45.0;
    Distribution phi = UniformRange{0.0, 90.0};
    Distribution h_uav = UniformRange{0.0, 500.0};
    double h_rx = citygeom::kDefaultRxHeight;
};

void validate(const GeomScenario &scenario);

Node sample_user(const CityLayout &layout, UserZone zone, double h_rx, RandomStream &rng);

enum class Face
{
    X, // x = (i - 1) * period + s, west face of building column i
    Y, // y = (j - 1) * period + s, south face of building row j
};

struct CandidateOP
{
    Face face = Face::X;
    int index = 0;
    double x = 0.0;
    double y = 0.0;
    double r_op = 0.0; // from the UAV ground projection
    BuildingCell cell;
};

/// Every crossing of the user->UAV ground segment with a user-facing
/// building face, strictly between the endpoints, sorted by r_op ascending.
/// The link azimuth must lie in the first quadrant.
std::vector<CandidateOP> candidate_ops(const Node &user, const Node &uav, const CityLayout &layout);

struct LinkTrace
{
    LoSOutcome outcome;
    Node user;
    Node uav;
    std::size_t candidates = 0;
    std::size_t heights_drawn = 0;
    std::size_t rejected = 0; // draws discarded because the UAV sat inside a building
};

/// One Monte-Carlo link. Draws with h_uav <= h_rx, or with the UAV inside the
/// building under it, are discarded and redrawn from the same stream.
LinkTrace trace_link(const GeomScenario &scenario, RandomStream &rng);
LoSOutcome simulate_link(const GeomScenario &scenario, RandomStream &rng);

/// Run r draws from a stream derived from (seed, r) only.
PLosEstimate estimate_plos(const GeomScenario &scenario, std::uint64_t n_runs, std::uint64_t seed);

struct EstimateCost
{
    PLosEstimate estimate;
    std::uint64_t heights_drawn = 0;
    std::uint64_t candidates = 0;
    std::uint64_t rejected = 0;
};

EstimateCost estimate_plos_with_cost(const GeomScenario &scenario, std::uint64_t n_runs, std::uint64_t seed);

} // namespace plos::simgeom
