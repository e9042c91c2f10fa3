// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/error.hpp"
#include "plos/estimate.hpp"
#include "plos/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace plos;
using namespace plos::harness;

namespace
{

ErrorCode code_of(auto &&fn)
{
    try
    {
        fn();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

std::string csv(const SweepSpec &spec)
{
    std::ostringstream os;
    write_csv(os, run_sweep(spec));
    return os.str();
}

SweepSpec geom_theta_sweep(const citygeom::BuiltUpParams &p, std::uint64_t runs, std::uint64_t seed)
{
    SweepSpec spec;
    spec.engine = GeomEngine{};
    spec.params = p;
    spec.axes = {{Variable::Theta, linear_grid(5.0, 90.0, 5.0)}};
    spec.n_runs = runs;
    spec.seed = seed;
    return spec;
}

} // namespace

TEST_CASE("wilson interval")
{
    const auto [lo0, hi0] = wilson_interval(0, 10, 1.96);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    const auto [lo1, hi1] = wilson_interval(10, 10, 1.96);
    CHECK(lo1 == doctest::Approx(0.722).epsilon(0.001 / 0.722));
    CHECK(hi1 == 1.0);
    const auto [lo2, hi2] = wilson_interval(50, 100, 1.96);
    CHECK(lo2 == doctest::Approx(0.404).epsilon(0.001 / 0.404));
    CHECK(hi2 == doctest::Approx(0.596).epsilon(0.001 / 0.596));
    CHECK(code_of([] { wilson_interval(11, 10); }) == ErrorCode::InvalidCounts);
    CHECK(code_of([] { wilson_interval(0, 0); }) == ErrorCode::InvalidCounts);
    CHECK(code_of([] { wilson_interval(1, 10, 0.0); }) == ErrorCode::InvalidCounts);
    for (std::uint64_t n = 1; n <= 60; ++n)
        for (std::uint64_t k = 0; k <= n; ++k)
        {
            const auto e = PLosEstimate::from_counts(k, n);
            CHECK_UNARY(0.0 <= e.ci_lo);
            CHECK_UNARY(e.ci_lo <= e.p_hat);
            CHECK_UNARY(e.p_hat <= e.ci_hi);
            CHECK_UNARY(e.ci_hi <= 1.0);
        }
    const auto exact = PLosEstimate::exact(0.25);
    CHECK(exact.closed_form);
    CHECK(exact.ci_lo == 0.25);
    CHECK(exact.ci_hi == 0.25);
}

TEST_CASE("linear grids")
{
    const auto g = linear_grid(5.0, 90.0, 5.0);
    REQUIRE(g.size() == 18);
    CHECK(g.front() == 5.0);
    CHECK(g.back() == 90.0);
    CHECK(linear_grid(50.0, 1000.0, 50.0).size() == 20);
    CHECK(linear_grid(0.1, 0.8, 0.1).size() == 8);
    CHECK(linear_grid(3.0, 3.0, 1.0).size() == 1);
    CHECK(code_of([] { linear_grid(5.0, 1.0, 1.0); }) == ErrorCode::IllegalSpec);
    CHECK(code_of([] { linear_grid(1.0, 5.0, 0.0); }) == ErrorCode::IllegalSpec);
}

TEST_CASE("variable names")
{
    for (auto v : {Variable::Theta, Variable::Phi, Variable::Radius, Variable::HUav, Variable::Gamma, Variable::Alpha})
        CHECK(variable_from_string(to_string(v)) == v);
    CHECK_FALSE(variable_from_string("rho"));
}

TEST_CASE("illegal sweeps")
{
    auto base = geom_theta_sweep(citygeom::kUrban, 10, 1);
    CHECK_NOTHROW(validate(base));
    auto expect_illegal = [](SweepSpec s) { CHECK(code_of([&] { validate(s); }) == ErrorCode::IllegalSpec); };

    auto s = base;
    s.axes.clear();
    expect_illegal(s);
    s = base;
    s.axes.push_back(s.axes.front());
    expect_illegal(s);
    s = base;
    s.axes.push_back({Variable::Radius, {100.0}});
    expect_illegal(s);
    s = base;
    s.n_runs = 0;
    expect_illegal(s);
    s = base;
    s.axes = {{Variable::Theta, {}}};
    expect_illegal(s);
    s = base;
    s.axes = {{Variable::Theta, {0.0, 10.0}}};
    expect_illegal(s);
    s = base;
    s.axes.push_back({Variable::Phi, {100.0}});
    expect_illegal(s);
    s = base;
    s.engine = Sim3DEngine{};
    s.axes.push_back({Variable::Phi, {0.0, 45.0}});
    expect_illegal(s);
    s = base;
    s.engine = Sim3DEngine{};
    s.zone = simgeom::UserZone::Street;
    expect_illegal(s);
    s = base;
    s.axes.push_back({Variable::Alpha, {0.2, 1.0}});
    expect_illegal(s);
    s = base;
    s.extent_x = 5.0;
    expect_illegal(s);
    s = base;
    s.h_uav_range = simgeom::UniformRange{0.0, 500.0};
    s.axes = {{Variable::Radius, {100.0}}};
    expect_illegal(s);
    s = base;
    s.engine = BaselineEngine{"empty", baselines::StepTable{}};
    expect_illegal(s);
}

TEST_CASE("baseline sweeps echo closed forms")
{
    const baselines::StepTable table{{{0.0, 30.0, 0.125}, {30.0, 60.0, 0.5}, {60.0, 90.0, 0.875}}};
    SweepSpec spec;
    spec.engine = BaselineEngine{"steps", table};
    spec.axes = {{Variable::Theta, linear_grid(5.0, 90.0, 5.0)}};
    const auto result = run_sweep(spec);
    REQUIRE(result.rows.size() == 18);
    for (const auto &row : result.rows)
    {
        const double theta = row.axis_values[0];
        const double expect = theta < 30.0 ? 0.125 : theta < 60.0 ? 0.5 : 0.875;
        CHECK(row.estimate.p_hat == expect);
        CHECK(row.estimate.closed_form);
        CHECK(row.estimate.n == 1);
    }
    const auto text = csv(spec);
    CHECK(text.find("\n5,1,0,0.125000,0.125000,0.125000,0.000\n") != std::string::npos);
    CHECK(text.find("\n90,1,0,0.875000,0.875000,0.875000,0.000\n") != std::string::npos);
}

TEST_CASE("grid product sweep over gamma takes gamma from the axis")
{
    SweepSpec spec;
    spec.engine = BaselineEngine{"grid_product", baselines::GridProduct{citygeom::kUrban}};
    spec.axes = {{Variable::Gamma, linear_grid(5.0, 50.0, 5.0)}, {Variable::Theta, {30.0}}};
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == 10);
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        CHECK(r.rows[i].estimate.p_hat < r.rows[i - 1].estimate.p_hat);
    CHECK(r.rows[2].estimate.p_hat == baselines::evaluate(baselines::GridProduct{citygeom::kUrban}, 30.0, 100.0, 1.5));
}

TEST_CASE("csv layout")
{
    auto spec = geom_theta_sweep(citygeom::kUrban, 50, 3);
    const auto text = csv(spec);
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    CHECK(line == "# spec: " + canonical_echo(spec));
    std::getline(is, line);
    CHECK(line == "theta,n,k,p_hat,ci_lo,ci_hi,ms_per_point");
    int rows = 0;
    while (std::getline(is, line))
    {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == 18);

    spec.axes.push_back({Variable::Phi, {0.0, 90.0}});
    spec.zone = simgeom::UserZone::Crossroad;
    const auto two = csv(spec);
    CHECK(two.find("\ntheta,phi,n,k,p_hat,ci_lo,ci_hi,ms_per_point\n") != std::string::npos);

    std::ostringstream timed;
    write_csv(timed, run_sweep(geom_theta_sweep(citygeom::kUrban, 50, 3)), true);
    CHECK(timed.str().substr(0, timed.str().find('\n')) == text.substr(0, text.find('\n')));
}

TEST_CASE("sweeps are reproducible")
{
    auto spec = geom_theta_sweep(citygeom::kDenseUrban, 300, 12);
    const auto a = csv(spec);
    CHECK(a == csv(spec));
    spec.workers = 3;
    CHECK(a == csv(spec));
    spec.seed = 13;
    CHECK(a != csv(spec));

    SweepSpec s3;
    s3.engine = Sim3DEngine{};
    s3.params = citygeom::kUrban;
    s3.extent_x = s3.extent_y = 1500.0;
    s3.axes = {{Variable::Theta, {20.0, 60.0}}};
    s3.n_runs = 5;
    s3.seed = 4;
    const auto b = csv(s3);
    s3.workers = 2;
    CHECK(b == csv(s3));
}

TEST_CASE("crossroad heatmap boundary columns")
{
    SweepSpec spec;
    spec.engine = GeomEngine{};
    spec.params = citygeom::kHighRise;
    spec.zone = simgeom::UserZone::Crossroad;
    spec.axes = {{Variable::Theta, linear_grid(10.0, 90.0, 10.0)}, {Variable::Phi, linear_grid(0.0, 90.0, 15.0)}};
    spec.n_runs = 200;
    spec.seed = 2;
    for (const auto &row : run_sweep(spec).rows)
    {
        const double theta = row.axis_values[0];
        const double phi = row.axis_values[1];
        if (phi == 0.0 || phi == 90.0 || theta == 90.0)
            CHECK(row.estimate.p_hat == 1.0);
    }
}

TEST_CASE("radius sweeps")
{
    SweepSpec spec;
    spec.engine = GeomEngine{};
    spec.params = citygeom::kUrban;
    spec.axes = {{Variable::HUav, {100.0, 200.0, 500.0}}, {Variable::Radius, {0.0, 100.0, 500.0, 1000.0}}};
    spec.n_runs = 1000;
    spec.seed = 5;
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == 12);
    for (std::size_t i = 0; i < r.rows.size(); i += 4)
    {
        CHECK(r.rows[i].estimate.p_hat == 1.0);
        CHECK(r.rows[i + 1].estimate.overlaps(r.rows[i + 3].estimate) == false);
    }
    // Higher altitude at the same ground distance sees more.
    CHECK(r.rows[11].estimate.ci_lo > r.rows[3].estimate.ci_hi);
}

TEST_CASE("theta sweeps rise up to interval overlap")
{
    for (const auto &env : citygeom::standard_environments())
    {
        CAPTURE(env.name);
        const auto rows = run_sweep(geom_theta_sweep(env.params, 1000, 21)).rows;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                CHECK(rows[j].estimate.ci_hi >= rows[i].estimate.ci_lo);
    }
}

TEST_CASE("environment ordering at moderate elevation")
{
    const auto urban = run_sweep(geom_theta_sweep(citygeom::kUrban, 2000, 3)).rows;
    const auto dense = run_sweep(geom_theta_sweep(citygeom::kDenseUrban, 2000, 3)).rows;
    const auto high = run_sweep(geom_theta_sweep(citygeom::kHighRise, 2000, 3)).rows;
    for (std::size_t i = 0; i < urban.size(); ++i)
    {
        const double theta = urban[i].axis_values[0];
        if (theta < 20.0 || theta > 70.0)
            continue;
        CAPTURE(theta);
        CHECK(urban[i].estimate.ci_hi >= dense[i].estimate.ci_lo);
        CHECK(dense[i].estimate.ci_hi >= high[i].estimate.ci_lo);
    }
}

TEST_CASE("geometry cost scales with the cotangent of the elevation")
{
    std::vector<double> xs, ys;
    for (double theta : {5.0, 8.0, 12.0, 20.0, 30.0, 45.0, 60.0})
    {
        simgeom::GeomScenario sc;
        sc.params = citygeom::kUrban;
        sc.theta = theta;
        sc.h_uav = simgeom::Fixed{100.0};
        const auto cost = simgeom::estimate_plos_with_cost(sc, 4000, 8);
        xs.push_back(1.0 / std::tan(theta * std::numbers::pi / 180.0));
        ys.push_back(static_cast<double>(cost.candidates) / 4000.0);
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(r * r > 0.99);
}

TEST_CASE("engine comparison")
{
    const std::vector<double> thetas{30.0, 90.0};
    const auto rows = compare_engines(citygeom::kUrban, thetas, 10, 500, 3, 1.5, 1500.0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].sim3d.p_hat == 1.0);
    CHECK(rows[1].geom.p_hat == 1.0);
    CHECK(rows[1].abs_delta == 0.0);
    CHECK(rows[0].abs_delta == doctest::Approx(std::abs(rows[0].sim3d.p_hat - rows[0].geom.p_hat)));

    const std::vector<double> spread{10.0, 45.0, 80.0};
    for (const auto &row : compare_engines({0.3, 500.0, 1e-6}, spread, 5, 500, 4, 1.5, 1500.0))
    {
        CHECK(row.sim3d.p_hat == 1.0);
        CHECK(row.geom.p_hat == 1.0);
    }
}
