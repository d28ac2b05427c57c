#include <catch2/catch_amalgamated.hpp>

#include "homhodge/grid.hpp"

using namespace homhodge;

TEST_CASE("interval grid nodes are uniform") {
    IntervalGrid g = build_interval_grid(-1.0, 1.0, 5);
    const double expected[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int i = 0; i < 5; ++i) REQUIRE(g.node(i) == Catch::Approx(expected[i]).margin(1e-15));
    REQUIRE(build_interval_grid(0.0, 1.0, 3).h == Catch::Approx(0.5));
}

TEST_CASE("interval grid rejects bad input") {
    REQUIRE_THROWS_AS(build_interval_grid(1.0, 0.0, 5), ConfigError);  // reversed bounds
    REQUIRE_THROWS_AS(build_interval_grid(0.0, 1.0, 2), ConfigError);
    REQUIRE_THROWS_AS(build_interval_grid(0.0, std::nan(""), 5), ConfigError);
}

TEST_CASE("radial grid excludes the origin") {
    RadialGrid g = build_radial_grid(0.1, 1.0, 10);
    REQUIRE(g.node(0) == Catch::Approx(0.1));
    REQUIRE(g.dimension == 3);
    REQUIRE_THROWS_AS(build_radial_grid(0.0, 1.0, 10), ConfigError);
    REQUIRE_THROWS_AS(build_radial_grid(-0.1, 1.0, 10), ConfigError);
}

TEST_CASE("box grid indexing") {
    BoxGrid2D g = build_box_grid(0.0, 1.0, 0.0, 2.0, 5, 9);
    REQUIRE(g.hx == Catch::Approx(0.25));
    REQUIRE(g.hy == Catch::Approx(0.25));
    REQUIRE(g.index(2, 3) == 3 * 5 + 2);
    REQUIRE(g.on_boundary(0, 4));
    REQUIRE(g.on_boundary(3, 8));
    REQUIRE_FALSE(g.on_boundary(2, 4));
    REQUIRE_THROWS_AS(build_box_grid(0, 1, 0, 1, 2, 5), ConfigError);
}
