#include <doctest.h>

#include <cmath>

#include "webmap/ensemble.hpp"

using namespace webmap;

TEST_CASE("uniform source") {
    UniformSource a(9), b(9), c(10);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double u = a.next();
        CHECK(u == b.next());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        differs |= u != c.next();
    }
    CHECK(differs);
}

TEST_CASE("disk ensemble") {
    const auto pts = disk_ensemble({15.0, 0.0}, 0.1, 10000, 1);
    REQUIRE(pts.size() == 10000);
    double mx = 0.0, mp = 0.0, inner = 0.0;
    for (const auto& s : pts) {
        const double r = std::hypot(s.x - 15.0, s.p);
        CHECK(r <= 0.1);
        mx += s.x - 15.0;
        mp += s.p;
        inner += r < 0.1 / std::sqrt(2.0) ? 1.0 : 0.0;
    }
    CHECK(std::abs(mx / 10000) < 0.005);
    CHECK(std::abs(mp / 10000) < 0.005);
    // Uniform in area: half the points fall inside radius r / sqrt(2).
    CHECK(inner / 10000 == doctest::Approx(0.5).epsilon(0.05));
    CHECK(disk_ensemble({15.0, 0.0}, 0.1, 100, 1) == disk_ensemble({15.0, 0.0}, 0.1, 100, 1));
    CHECK(disk_ensemble({15.0, 0.0}, 0.0, 3, 1)[2] == PhaseState{15.0, 0.0});
}

TEST_CASE("box and grid ensembles") {
    for (const auto& s : box_ensemble(-1.0, 2.0, 3.0, 4.0, 1000, 5)) {
        CHECK(s.x >= -1.0);
        CHECK(s.x < 2.0);
        CHECK(s.p >= 3.0);
        CHECK(s.p < 4.0);
    }
    const auto g = grid_ensemble(-1.0, 1.0, 0.0, 4.0, 3, 5);
    REQUIRE(g.size() == 15);
    CHECK(g[0] == PhaseState{-1.0, 0.0});
    CHECK(g[1] == PhaseState{0.0, 0.0});
    CHECK(g[2] == PhaseState{1.0, 0.0});
    CHECK(g[3] == PhaseState{-1.0, 1.0});
    CHECK(g[14] == PhaseState{1.0, 4.0});
    CHECK(grid_ensemble(-1.0, 1.0, -1.0, 1.0, 1, 1).front() == PhaseState{0.0, 0.0});
}
