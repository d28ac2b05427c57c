#include <catch2/catch_amalgamated.hpp>

#include "homhodge/grid.hpp"
#include "homhodge/scale_field.hpp"

using namespace homhodge;

TEST_CASE("1D distance field") {
    IntervalGrid g = build_interval_grid(-1.0, 1.0, 21);
    DistanceField d = distance_field(PointSurface1D{0.0}, g);
    int i = 7;  // x = -0.3
    REQUIRE(g.node(i) == Catch::Approx(-0.3));
    REQUIRE(d.xi[i] == Catch::Approx(0.3));
    REQUIRE(d.side[i] == Side::Interior);  // left of the point by convention
    REQUIRE(d.side[14] == Side::Exterior);
    REQUIRE(d.xi[10] == 0.0);
}

TEST_CASE("1D surface may lie outside the grid") {
    IntervalGrid g = build_interval_grid(1.0, 2.0, 11);
    DistanceField d = distance_field(PointSurface1D{0.0}, g);
    for (int i = 0; i < g.n; ++i) {
        REQUIRE(d.xi[i] >= 1.0);
        REQUIRE(d.side[i] == Side::Exterior);
    }
}

TEST_CASE("radial distance field") {
    RadialGrid g = build_radial_grid(0.1, 1.6, 16);
    DistanceField d = distance_field(SphereSurface{0.5}, g);
    int i = 7;  // r = 0.8
    REQUIRE(g.node(i) == Catch::Approx(0.8));
    REQUIRE(d.xi[i] == Catch::Approx(0.3));
    REQUIRE(d.side[i] == Side::Exterior);
    REQUIRE(d.side[0] == Side::Interior);
    REQUIRE_THROWS_AS(distance_field(SphereSurface{2.0}, g), ConfigError);
}

TEST_CASE("circle distance field hits the 3-4-5 node exactly") {
    BoxGrid2D g = build_box_grid(-2.0, 2.0, -2.0, 2.0, 17, 17);  // spacing 0.25
    DistanceField d = distance_field(CircleSurface{0.0, 0.0, 1.25}, g);
    int k = g.index(11, 12);  // node (0.75, 1.0): hypot = 1.25
    REQUIRE(d.xi[k] <= 1e-15);
    int inside = g.index(8, 8);
    REQUIRE(d.side[inside] == Side::Interior);
    int outside = g.index(16, 16);
    REQUIRE(d.side[outside] == Side::Exterior);
    REQUIRE_THROWS_AS(distance_field(CircleSurface{0.0, 0.0, 2.5}, g), ConfigError);
}
