#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "wptsim/geometry.hpp"
#include "wptsim/rng.hpp"

using namespace wptsim;
using namespace wptsim::geometry;

TEST_CASE("build_grid produces dense row-major cell centers") {
    SUBCASE("full-scale field") {
        const auto grid = build_grid({20.0, 20.0, 0.5});
        CHECK(grid.size() == 1600);
        CHECK(grid.front().center.x == doctest::Approx(0.25));
        CHECK(grid.front().center.y == doctest::Approx(0.25));
        CHECK(grid.back().index == 1599);
    }
    SUBCASE("single cell") {
        const auto grid = build_grid({1.0, 1.0, 1.0});
        REQUIRE(grid.size() == 1);
        CHECK(grid[0].center.x == doctest::Approx(0.5));
        CHECK(grid[0].center.y == doctest::Approx(0.5));
    }
    SUBCASE("4x2 field") {
        const auto grid = build_grid({2.0, 1.0, 0.5});
        CHECK(grid.size() == 8);
    }
    SUBCASE("count equals area over epsilon^2, centers stay inside, spacing >= epsilon") {
        const Area area{3.0, 2.0, 0.5};
        const auto grid = build_grid(area);
        CHECK(grid.size() == static_cast<std::size_t>(
                                 area.width * area.height / (area.epsilon * area.epsilon)));
        for (std::size_t a = 0; a < grid.size(); ++a) {
            CHECK(grid[a].center.x > 0.0);
            CHECK(grid[a].center.x < area.width);
            CHECK(grid[a].center.y > 0.0);
            CHECK(grid[a].center.y < area.height);
            CHECK(grid[a].index == static_cast<int>(a));
            for (std::size_t b = a + 1; b < grid.size(); ++b) {
                CHECK(distance(grid[a].center, grid[b].center) >=
                      area.epsilon * (1.0 - 1e-12));
            }
        }
    }
    SUBCASE("non-divisible dimensions are rejected") {
        CHECK_THROWS_AS(build_grid({2.3, 1.0, 0.5}), ConfigError);
        CHECK_THROWS_AS(build_grid({-1.0, 1.0, 0.5}), ConfigError);
        CHECK_THROWS_AS(build_grid({1.0, 1.0, 2.0}), ConfigError);
    }
}

TEST_CASE("distance") {
    CHECK(distance(Point{0.0, 0.0}, Point{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(distance(Point{1.0, 1.0}, Point{1.0, 1.0}) == 0.0);
    CHECK(distance(Point{0.25, 0.25}, Point{0.75, 0.25}) == doctest::Approx(0.5));
    CHECK(distance(GridLocation{0, {0.0, 0.0}}, Point{3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("discretization ratio bound") {
    SUBCASE("zero epsilon collapses to gamma") {
        BeamSectorGeometry geom;
        geom.d1 = 3.7;
        geom.gamma = 2.0;
        CHECK(discretization_ratio_bound(geom, 0.0) == doctest::Approx(2.0));
    }
    SUBCASE("worked value") {
        BeamSectorGeometry geom;
        geom.d1 = 1.5;
        geom.gamma = 2.0;
        // independent recomputation of the same quantity
        const double s = std::sqrt(2.0) * 0.5 / 2.0;
        const double expected = 2.0 * std::pow((1.5 + s) / (1.5 - s), 2.0);
        const double got = discretization_ratio_bound(geom, 0.5);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        CHECK(got == doctest::Approx(5.2279).epsilon(2e-4));
    }
    SUBCASE("overlapping charger is rejected") {
        BeamSectorGeometry geom;
        geom.d1 = 0.3;
        geom.gamma = 2.0;
        CHECK_THROWS_AS(discretization_ratio_bound(geom, 0.5), ModelError);
    }
    SUBCASE("bound >= gamma, monotone in epsilon, antitone in d1") {
        auto stream = rng::substream(3, rng::Purpose::Instance);
        for (int k = 0; k < 200; ++k) {
            BeamSectorGeometry geom;
            geom.gamma = stream.uniform(1.3, 2.5);
            geom.d1 = stream.uniform(1.0, 8.0);
            const double eps = stream.uniform(0.0, 1.0);
            const double b = discretization_ratio_bound(geom, eps);
            CHECK(b >= geom.gamma - 1e-12);
            if (eps > 0.0) CHECK(b > geom.gamma);
            CHECK(discretization_ratio_bound(geom, eps + 0.1) > b);
            BeamSectorGeometry farther = geom;
            farther.d1 += 0.5;
            if (eps > 0.0) CHECK(discretization_ratio_bound(farther, eps) < b);
        }
    }
}

TEST_CASE("minimum stand-off check") {
    BeamSectorGeometry sector;
    sector.d1 = 5.0;
    sector.theta_m = std::numbers::pi / 2.0;
    sector.theta01 = sector.theta_m - 0.3;
    sector.theta02 = sector.theta_m + 0.3;
    sector.thetae1 = sector.theta_m - 0.15;
    sector.thetae2 = sector.theta_m + 0.15;

    SUBCASE("large distance passes") {
        CHECK(min_distance_ok(5.0, 0.5, sector));
    }
    SUBCASE("zero distance fails") {
        CHECK_FALSE(min_distance_ok(0.0, 0.5, sector));
    }
    SUBCASE("charger inside the cell fails") {
        BeamSectorGeometry same_cell = sector;
        same_cell.d1 = std::sqrt(2.0) * 0.5 / 2.0;
        CHECK_FALSE(min_distance_ok(10.0, 0.5, same_cell));
    }
    SUBCASE("binding bound near the axis") {
        BeamSectorGeometry low = sector;
        low.theta_m = 0.5;
        low.theta01 = 0.2;
        low.thetae1 = 0.35;
        low.theta02 = 0.8;
        low.thetae2 = 0.65;
        // lower-side term: (sqrt(2)*0.25) * sin(pi/4 - 0.2) / sin(0.15) ~ 1.24
        CHECK_FALSE(min_distance_ok(1.0, 0.5, low));
        CHECK(min_distance_ok(2.0, 0.5, low));
    }
    SUBCASE("non-finite angles fail") {
        BeamSectorGeometry bad = sector;
        bad.thetae1 = std::numeric_limits<double>::quiet_NaN();
        CHECK_FALSE(min_distance_ok(5.0, 0.5, bad));
    }
}
