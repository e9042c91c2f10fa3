// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Parameter sweeps over the engines, cross-engine comparison and CSV output.

#pragma once

#include "plos/baselines.hpp"
#include "plos/citygeom.hpp"
#include "plos/estimate.hpp"
#include "plos/sim3d.hpp"
#include "plos/simgeom.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plos::harness
{

enum class Variable
{
    Theta,
    Phi,
    Radius,
    HUav,
    Gamma,
    Alpha,
};

std::string_view to_string(Variable v);
std::optional<Variable> variable_from_string(std::string_view name);

struct Axis
{
    Variable variable = Variable::Theta;
    std::vector<double> values;
};

/// lo, lo + step, ... up to hi inclusive (within 1e-9 * step).
std::vector<double> linear_grid(double lo, double hi, double step);

struct Sim3DEngine
{
};

struct GeomEngine
{
};

struct BaselineEngine
{
    std::string name;
    baselines::BaselineModel model;
};

using Engine = std::variant<Sim3DEngine, GeomEngine, BaselineEngine>;

struct SweepSpec
{
    Engine engine = GeomEngine{};
    citygeom::BuiltUpParams params = citygeom::kUrban;
    double extent_x = 3000.0;
    double extent_y = 3000.0;
    std::vector<Axis> axes; // one or two; the first is the outer loop

    // Values of the unswept variables.
    double theta = 45.0;
    std::optional<double> phi;                          // unset: uniform over [0, 90]
    double h_uav = 100.0;
    std::optional<simgeom::UniformRange> h_uav_range;   // geom only; overrides h_uav
    double h_rx = citygeom::kDefaultRxHeight;
    simgeom::UserZone zone = simgeom::UserZone::FreeSpace;
    sim3d::UavPlacementPolicy policy = sim3d::RandomOverCity{100.0}; // altitude taken from h_uav
    int users = 360;

    std::uint64_t n_runs = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Throws Error(IllegalSpec) describing the first problem found.
void validate(const SweepSpec &spec);

/// Canonical single-line description of a spec, excluding `workers`.
std::string canonical_echo(const SweepSpec &spec);

struct SweepRow
{
    std::vector<double> axis_values;
    PLosEstimate estimate;
    double ms_per_point = 0.0;
};

struct SweepResult
{
    std::string spec_echo;
    std::vector<Variable> axes;
    std::vector<SweepRow> rows; // outer axis major
};

/// Every grid point uses the same master seed, so points share random streams
/// run by run and differ only through the swept variables.
SweepResult run_sweep(const SweepSpec &spec);

/// `# spec: <echo>` then `axis1[,axis2],n,k,p_hat,ci_lo,ci_hi,ms_per_point`.
/// Without `timing` the ms column is written as 0.000 so output is a pure
/// function of the sweep definition.
void write_csv(std::ostream &os, const SweepResult &result, bool timing = false);

struct EngineComparison
{
    double theta = 0.0;
    PLosEstimate sim3d;
    PLosEstimate geom;
    double abs_delta = 0.0;
};

/// Both engines at h_uav = 100 m: the 3D engine with a random UAV and 360
/// circle receivers, the geometry engine with a free-space user and uniform
/// azimuth.
std::vector<EngineComparison> compare_engines(const citygeom::BuiltUpParams &env, std::span<const double> thetas,
                                              std::uint64_t n3d, std::uint64_t ngeom, std::uint64_t seed,
                                              double h_rx = citygeom::kDefaultRxHeight, double extent = 3000.0);

std::string format_probability(double p);
std::string format_number(double v);

} // namespace plos::harness
