// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "support.hpp"

#include "plos/citygeom.hpp"
#include "plos/error.hpp"
#include "plos/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace plos;
using namespace plos::citygeom;

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

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

} // namespace

TEST_CASE("named environments carry the tabulated parameters")
{
    CHECK(standard_environments().size() == 4);
    const auto urban = environment_by_name("urban");
    REQUIRE(urban);
    CHECK(urban->alpha == 0.3);
    CHECK(urban->beta == 500.0);
    CHECK(urban->gamma == 15.0);
    CHECK(*environment_by_name("suburban") == BuiltUpParams{0.1, 750.0, 8.0});
    CHECK(*environment_by_name("dense-urban") == BuiltUpParams{0.5, 300.0, 20.0});
    CHECK(*environment_by_name("high-rise") == BuiltUpParams{0.5, 300.0, 50.0});
    CHECK(*environment_by_name("ghent") == BuiltUpParams{0.435, 4679.0, 8.8});
    CHECK_FALSE(environment_by_name("rural"));
}

TEST_CASE("layout from built-up parameters")
{
    SUBCASE("urban")
    {
        const auto L = derive_layout(kUrban);
        CHECK(L.w == doctest::Approx(24.494897427831777).epsilon(1e-12));
        CHECK(L.s == doctest::Approx(20.226462122164012).epsilon(1e-12));
        CHECK(L.period == doctest::Approx(44.72135954999579).epsilon(1e-12));
    }
    SUBCASE("dense urban")
    {
        const auto L = derive_layout(kDenseUrban);
        CHECK(L.w == doctest::Approx(40.825).epsilon(1e-4));
        CHECK(L.s == doctest::Approx(16.910).epsilon(1e-4));
    }
    SUBCASE("exact decimal case")
    {
        const auto L = derive_layout({0.25, 10000.0, 10.0});
        CHECK(L.w == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(L.s == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(L.period == doctest::Approx(10.0).epsilon(1e-15));
    }
    SUBCASE("extent is kept")
    {
        const auto L = derive_layout(kUrban, 3000.0, 2000.0);
        CHECK(L.extent_x == 3000.0);
        CHECK(L.extent_y == 2000.0);
    }
}

TEST_CASE("invalid built-up parameters are rejected")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const BuiltUpParams p : {BuiltUpParams{0.0, 500, 15}, BuiltUpParams{1.0, 500, 15}, BuiltUpParams{-0.1, 500, 15},
                                  BuiltUpParams{0.3, 0, 15}, BuiltUpParams{0.3, -1, 15}, BuiltUpParams{0.3, 500, 0},
                                  BuiltUpParams{0.3, 500, -2}, BuiltUpParams{nan, 500, 15}})
        CHECK(code_of([&] { derive_layout(p); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { derive_layout(kUrban, 10.0, 3000.0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("layout identities hold across random parameters")
{
    RandomStream rng(2024);
    for (int i = 0; i < 2000; ++i)
    {
        const BuiltUpParams p{rng.uniform(0.01, 0.99), std::exp(rng.uniform(0.0, std::log(20000.0))), 10.0};
        const auto L = derive_layout(p);
        CHECK(rel_close(L.s + L.w, 1000.0 / std::sqrt(p.beta), 1e-12));
        CHECK(rel_close(L.w * L.w * p.beta / 1e6, p.alpha, 1e-12));
        CHECK(L.s > 0.0);
        CHECK(L.w > 0.0);
    }
}

TEST_CASE("rayleigh density")
{
    CHECK(rayleigh_pdf(0.0, 15.0) == 0.0);
    CHECK(rayleigh_pdf(15.0, 15.0) == doctest::Approx(0.04043537731417556).epsilon(1e-12));
    CHECK(code_of([] { rayleigh_pdf(-1.0, 15.0); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { rayleigh_pdf(1.0, 0.0); }) == ErrorCode::InvalidParams);

    // Composite Simpson over [0, 12 gamma].
    for (double gamma : {8.0, 15.0, 50.0})
    {
        const int n = 20000;
        const double hi = 12.0 * gamma;
        const double h = hi / n;
        double sum = rayleigh_pdf(0.0, gamma) + rayleigh_pdf(hi, gamma);
        for (int i = 1; i < n; ++i)
            sum += rayleigh_pdf(i * h, gamma) * (i % 2 ? 4.0 : 2.0);
        CHECK(sum * h / 3.0 == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(rayleigh_cdf(15.0, 15.0) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("rayleigh sampler endpoints and moments")
{
    CHECK(rayleigh_from_unit(1.0, 20.0) == 0.0);
    CHECK(rayleigh_from_unit(std::exp(-0.5), 20.0) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(code_of([] { rayleigh_from_unit(0.0, 20.0); }) == ErrorCode::InvalidParams);

    RandomStream rng(99);
    const std::size_t n = 1'000'000;
    double sum = 0.0;
    std::vector<double> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double h = sample_height(20.0, rng);
        CHECK_UNARY(h >= 0.0);
        sum += h;
        xs.push_back(h);
    }
    CHECK(sum / n == doctest::Approx(20.0 * std::sqrt(std::numbers::pi / 2.0)).epsilon(0.1 / 25.066));
    const double d = testing::ks_statistic(xs, [](double h) { return 1.0 - std::exp(-h * h / 800.0); });
    CHECK(d < testing::ks_critical_1pct(n));
}

TEST_CASE("ground classification")
{
    const auto L = derive_layout(kUrban, 3000.0, 3000.0);
    CHECK(classify_point(10.0, 10.0, L) == CellKind{Crossroad{}});
    CHECK(classify_point(10.0, 30.0, L) == CellKind{Street{}});
    CHECK(classify_point(30.0, 10.0, L) == CellKind{Street{}});
    CHECK(classify_point(30.0, 30.0, L) == CellKind{BuildingCell{1, 1}});
    CHECK(classify_point(30.0 + 2 * L.period, 30.0 + 5 * L.period, L) == CellKind{BuildingCell{3, 6}});
    SUBCASE("boundary belongs to the building")
    {
        CHECK(classify_point(L.s, L.s, L) == CellKind{BuildingCell{1, 1}});
        CHECK(classify_point(std::nextafter(L.s, 0.0), L.s, L) == CellKind{Street{}});
        CHECK(classify_point(L.period, 30.0, L) == CellKind{Street{}});
    }
    CHECK(code_of([&] { classify_point(-0.1, 10.0, L); }) == ErrorCode::OutOfExtent);
    CHECK(code_of([&] { classify_point(10.0, 3000.1, L); }) == ErrorCode::OutOfExtent);
    CHECK(classify_point(3000.0, 3000.0, L).index() < 3);
}

TEST_CASE("classification matches floor arithmetic on random points")
{
    RandomStream rng(5);
    for (const auto &env : standard_environments())
    {
        const auto L = derive_layout(env.params, 3000.0, 3000.0);
        for (int i = 0; i < 20000; ++i)
        {
            const double x = rng.uniform(0.0, 3000.0);
            const double y = rng.uniform(0.0, 3000.0);
            const auto ref = testing::building_under(L, x, y);
            const auto got = classify_point(x, y, L);
            if (ref)
                CHECK(got == CellKind{*ref});
            else
                CHECK_FALSE(is_building(got));
        }
    }
}

TEST_CASE("building footprints tile the built-up fraction")
{
    for (const auto &env : standard_environments())
    {
        const auto L = derive_layout(env.params);
        const int n = 2000;
        const double step = L.period / n;
        long long hits = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                hits += is_building(classify_ground((i + 0.5) * step, (j + 0.5) * step, L));
        const double frac = static_cast<double>(hits) / (static_cast<double>(n) * n);
        CHECK(frac == doctest::Approx(env.params.alpha).epsilon(2.0 / n / env.params.alpha));
    }
}

TEST_CASE("link geometry")
{
    const auto link = LinkGeometry::between({100.0, 100.0, 50.0}, {0.0, 0.0, 1.5});
    CHECK(link.r_rx == doctest::Approx(100.0 * std::sqrt(2.0)));
    CHECK(link.theta == doctest::Approx(std::atan2(48.5, 100.0 * std::sqrt(2.0)) * 180.0 / std::numbers::pi));
    CHECK(link.phi == doctest::Approx(45.0));
    const auto up = LinkGeometry::between({5.0, 5.0, 50.0}, {5.0, 5.0, 1.5});
    CHECK(up.r_rx == 0.0);
    CHECK(up.theta == 90.0);
    const auto west = LinkGeometry::between({0.0, 10.0, 50.0}, {10.0, 10.0, 1.5});
    CHECK(west.phi == doctest::Approx(180.0));
    const auto south = LinkGeometry::between({10.0, 0.0, 50.0}, {10.0, 10.0, 1.5});
    CHECK(south.phi == doctest::Approx(270.0));
}

TEST_CASE("sincos is exact on the axes")
{
    CHECK(sincos_degrees(0.0).sin == 0.0);
    CHECK(sincos_degrees(0.0).cos == 1.0);
    CHECK(sincos_degrees(90.0).sin == 1.0);
    CHECK(sincos_degrees(90.0).cos == 0.0);
    CHECK(sincos_degrees(180.0).cos == -1.0);
    CHECK(sincos_degrees(180.0).sin == 0.0);
    CHECK(sincos_degrees(270.0).sin == -1.0);
    CHECK(sincos_degrees(30.0).sin == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("UAV position from angles")
{
    const Node user{0.0, 0.0, 0.0};
    SUBCASE("overhead")
    {
        const auto u = uav_position_from_angles(user, 90.0, 0.0, 100.0);
        CHECK(u.x == 0.0);
        CHECK(u.y == 0.0);
        CHECK(u.z == 100.0);
    }
    SUBCASE("45 degrees along x")
    {
        const auto u = uav_position_from_angles(user, 45.0, 0.0, 100.0);
        CHECK(u.x == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(u.y == 0.0);
    }
    SUBCASE("30 degrees along y")
    {
        const auto u = uav_position_from_angles(user, 30.0, 90.0, 100.0);
        CHECK(u.x == 0.0);
        CHECK(u.y == doctest::Approx(100.0 * std::sqrt(3.0)).epsilon(1e-12));
        const auto link = LinkGeometry::between(u, user);
        CHECK(link.theta == doctest::Approx(30.0).epsilon(1e-12));
        CHECK(link.phi == doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("azimuth 90 moves along y")
    {
        const auto u = uav_position_from_angles({3.0, 4.0, 1.5}, 45.0, 90.0, 101.5);
        CHECK(u.x == 3.0);
        CHECK(u.y == doctest::Approx(104.0).epsilon(1e-12));
    }
    CHECK(code_of([&] { uav_position_from_angles(user, 0.0, 0.0, 100.0); }) == ErrorCode::InvalidAngle);
    CHECK(code_of([&] { uav_position_from_angles(user, 91.0, 0.0, 100.0); }) == ErrorCode::InvalidAngle);
    CHECK(code_of([&] { uav_position_from_angles(user, 45.0, 91.0, 100.0); }) == ErrorCode::InvalidAngle);
    CHECK(code_of([&] { uav_position_from_angles(user, 45.0, -1.0, 100.0); }) == ErrorCode::InvalidAngle);
    CHECK(code_of([&] { uav_position_from_angles(user, 45.0, 10.0, 0.0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("angles survive a round trip through positions")
{
    RandomStream rng(77);
    for (int i = 0; i < 10000; ++i)
    {
        const Node user{rng.uniform(0.0, 1000.0), rng.uniform(0.0, 1000.0), 1.5};
        const double theta = rng.uniform(0.5, 89.5);
        const double phi = rng.uniform(0.0, 90.0);
        const double h = rng.uniform(2.0, 500.0);
        const auto link = LinkGeometry::between(uav_position_from_angles(user, theta, phi, h), user);
        CHECK(link.theta == doctest::Approx(theta).epsilon(1e-9));
        if (phi > 1e-6)
            CHECK(link.phi == doctest::Approx(phi).epsilon(1e-9));
    }
}

TEST_CASE("seed derivation is deterministic and label sensitive")
{
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    RandomStream a(5), b(5);
    for (int i = 0; i < 100; ++i)
        CHECK(a.uniform() == b.uniform());
    RandomStream c(6);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = c.uniform();
        CHECK_UNARY(u >= 0.0 && u < 1.0);
        const double v = c.uniform_open_closed();
        CHECK_UNARY(v > 0.0 && v <= 1.0);
        CHECK(c.index(7) < 7u);
    }
}
