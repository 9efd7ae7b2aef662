#include <doctest.h>

#include <cmath>
#include <numbers>

#include "webmap/fixed_points.hpp"
#include "webmap/portrait.hpp"
#include "webmap/web_map.hpp"

using namespace webmap;

namespace {

PortraitSpec small_spec(PortraitMode mode) {
    PortraitSpec spec;
    spec.params = MapParams::resonant(0.01, 4);
    spec.initials = GridInitials{{-8.0, 8.0, -8.0, 8.0}, 9, 9, true};
    spec.n_kicks = 800;
    spec.viewport = {-10.0, 10.0, -10.0, 10.0};
    spec.mode = mode;
    spec.nx = 101;
    spec.np = 101;
    return spec;
}

void check_accounting(const OccupancyGrid& g) {
    CHECK(g.binned() + g.out_of_viewport + g.escaped_tail == g.total_points);
    CHECK(g.saturated == 0);
}

}  // namespace

TEST_CASE("bin index") {
    CHECK(bin_index(-1.0, -1.0, 1.0, 4) == 0u);
    CHECK(bin_index(-0.5, -1.0, 1.0, 4) == 1u);
    CHECK(bin_index(0.999, -1.0, 1.0, 4) == 3u);
    CHECK(bin_index(1.0, -1.0, 1.0, 4) == 3u);
    CHECK_FALSE(bin_index(1.0001, -1.0, 1.0, 4).has_value());
    CHECK_FALSE(bin_index(-1.0001, -1.0, 1.0, 4).has_value());
    CHECK_FALSE(bin_index(std::nan(""), -1.0, 1.0, 4).has_value());
}

TEST_CASE("initial conditions") {
    const auto g = materialize(GridInitials{{-1.0, 1.0, -2.0, 2.0}, 3, 4, true});
    REQUIRE(g.size() == 13);
    CHECK(g.back() == PhaseState{0.0, 0.0});
    CHECK(g.front() == PhaseState{-1.0, -2.0});
    const auto r = materialize(RandomInitials{50, {-0.5, 0.5, -0.5, 0.5}, 7});
    REQUIRE(r.size() == 50);
    for (const auto& s : r) {
        CHECK(std::abs(s.x) <= 0.5);
        CHECK(std::abs(s.p) <= 0.5);
    }
    CHECK(r == materialize(RandomInitials{50, {-0.5, 0.5, -0.5, 0.5}, 7}));
    CHECK(r != materialize(RandomInitials{50, {-0.5, 0.5, -0.5, 0.5}, 8}));
    CHECK_FALSE(describe(RandomInitials{}).empty());
}

TEST_CASE("portrait spec validation") {
    auto spec = small_spec(PortraitMode::grid);
    spec.viewport = {1.0, 1.0, -1.0, 1.0};
    CHECK_THROWS_AS(render_portrait(spec), std::invalid_argument);
    spec = small_spec(PortraitMode::grid);
    spec.nx = 1;
    CHECK_THROWS_AS(render_portrait(spec), std::invalid_argument);
    spec.mode = PortraitMode::points;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("points mode records every iterate of every orbit") {
    const auto spec = small_spec(PortraitMode::points);
    const auto res = render_portrait(spec);
    CHECK(res.n_orbits == 82);
    CHECK(res.total_iterates == 82 * 801);
    CHECK(res.cloud.size() + res.escaped_tail == res.total_iterates);
    // The first orbit is the corner (-8, -8); replay it with the reference stepper.
    const auto rec = iterate({-8.0, -8.0}, spec.params, 5);
    for (std::size_t i = 0; i < rec.states.size(); ++i) {
        CHECK(res.cloud[i].x == doctest::Approx(rec.states[i].x).epsilon(1e-12));
        CHECK(res.cloud[i].p == doctest::Approx(rec.states[i].p).epsilon(1e-12));
    }
}

TEST_CASE("grid mode equals binning the point cloud") {
    const auto points = render_portrait(small_spec(PortraitMode::points));
    const auto grid = render_portrait(small_spec(PortraitMode::grid));
    REQUIRE(grid.grid.has_value());
    const auto binned = bin_cloud(points.cloud, grid.grid->viewport, grid.grid->nx, grid.grid->np);
    CHECK(binned.counts == grid.grid->counts);
    CHECK(binned.out_of_viewport == grid.grid->out_of_viewport);
    check_accounting(*grid.grid);
    CHECK(grid.escaped_orbits == points.escaped_orbits);
}

TEST_CASE("escaping orbits are accounted for") {
    PortraitSpec spec;
    spec.params = MapParams::resonant(0.5, 5);
    spec.initials = ExplicitInitials{{{15.0, 0.0}, {0.1, 0.0}, {1e6, 0.0}}};
    spec.n_kicks = 100;
    spec.mode = PortraitMode::grid;
    spec.nx = spec.np = 16;
    const auto res = render_portrait(spec);
    CHECK(res.escaped_orbits == 2);
    check_accounting(*res.grid);
    spec.mode = PortraitMode::points;
    const auto pts = render_portrait(spec);
    CHECK(pts.cloud.size() + pts.escaped_tail == pts.total_iterates);
}

TEST_CASE("occupancy of a negation-closed ensemble is point symmetric") {
    auto spec = small_spec(PortraitMode::grid);
    spec.params = MapParams::resonant(0.01, 5);
    const auto g = *render_portrait(spec).grid;
    for (std::size_t ip = 0; ip < g.np; ++ip) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            REQUIRE(g.at(ix, ip) == g.at(g.nx - 1 - ix, g.np - 1 - ip));
        }
    }
}

TEST_CASE("rotation only: orbits stay on their circles") {
    PortraitSpec spec;
    spec.params = MapParams::resonant(0.0, 4);
    spec.initials = RandomInitials{20, {-3.0, 3.0, -3.0, 3.0}, 3};
    spec.n_kicks = 200;
    spec.viewport = {-5.0, 5.0, -5.0, 5.0};
    const auto res = render_portrait(spec);
    const auto initials = materialize(spec.initials);
    for (std::size_t o = 0; o < initials.size(); ++o) {
        const double r = std::hypot(initials[o].x, initials[o].p);
        for (std::size_t k = 0; k <= spec.n_kicks; ++k) {
            const auto& s = res.cloud[o * (spec.n_kicks + 1) + k];
            REQUIRE(std::abs(std::hypot(s.x, s.p) - r) < 1e-12);
        }
    }
}

TEST_CASE("portraits are independent of thread count and kernel") {
    auto spec = small_spec(PortraitMode::grid);
    const auto base = render_portrait(spec, {1, kernels::Isa::scalar});
    CHECK(*render_portrait(spec, {3, kernels::Isa::scalar}).grid == *base.grid);
    if (kernels::supported(kernels::Isa::avx2)) {
        CHECK(*render_portrait(spec, {2, kernels::Isa::avx2}).grid == *base.grid);
        spec.mode = PortraitMode::points;
        CHECK(render_portrait(spec, {1, kernels::Isa::avx2}).cloud ==
              render_portrait(spec, {4, kernels::Isa::scalar}).cloud);
    }
}

TEST_CASE("magnify") {
    const auto spec = small_spec(PortraitMode::grid);
    SUBCASE("full window at refine 1 reproduces the portrait") {
        CHECK(magnify(spec, spec.viewport, 1) == *render_portrait(spec).grid);
    }
    SUBCASE("window around an island centre") {
        const auto fixed = find_fixed_points(spec.params);
        const FixedPoint* centre = nullptr;
        for (const auto& fp : fixed.points) {
            if (fp.stability == StabilityClass::elliptic) centre = &fp;
        }
        REQUIRE(centre != nullptr);
        const Viewport window{centre->state.x - 2.0, centre->state.x + 2.0, centre->state.p - 2.0,
                              centre->state.p + 2.0};
        const auto g = magnify(spec, window, 4);
        CHECK(g.nx == spec.nx * 4);
        CHECK(g.binned() > 0);
        check_accounting(g);
        // The centre is fixed and starts two orbits (lattice node plus the
        // appended origin), so its bin holds exactly two orbits of iterates.
        const auto ix = bin_index(centre->state.x, window.x_min, window.x_max, g.nx);
        const auto ip = bin_index(centre->state.p, window.p_min, window.p_max, g.np);
        CHECK(g.at(*ix, *ip) == 2 * (spec.n_kicks + 1));
    }
    SUBCASE("window nobody reaches") {
        PortraitSpec rot = spec;
        rot.params = MapParams::resonant(0.0, 4);
        rot.initials = GridInitials{{-1.0, 1.0, -1.0, 1.0}, 5, 5, true};
        const auto g = magnify(rot, {5.0, 9.0, 5.0, 9.0}, 2);
        CHECK(g.binned() == 0);
        check_accounting(g);
    }
    SUBCASE("bad windows") {
        CHECK_THROWS_AS(magnify(spec, {-20.0, 0.0, 0.0, 1.0}, 1), std::invalid_argument);
        CHECK_THROWS_AS(magnify(spec, {0.0, 1.0, 0.0, 1.0}, 0), std::invalid_argument);
    }
}

TEST_CASE("occupancy grid merge and saturation") {
    OccupancyGrid a({0.0, 1.0, 0.0, 1.0}, 2, 2), b({0.0, 1.0, 0.0, 1.0}, 2, 2);
    a.add({0.25, 0.25});
    a.add({2.0, 0.25});
    b.add({0.75, 0.75});
    a.merge(b);
    CHECK(a.at(0, 0) == 1);
    CHECK(a.at(1, 1) == 1);
    CHECK(a.out_of_viewport == 1);
    OccupancyGrid full({0.0, 1.0, 0.0, 1.0}, 2, 2);
    full.counts[0] = 0xffffffffu;
    full.add({0.1, 0.1});
    CHECK(full.counts[0] == 0xffffffffu);
    CHECK(full.saturated == 1);
    CHECK_THROWS_AS(a.merge(OccupancyGrid({0.0, 1.0, 0.0, 1.0}, 3, 2)), std::invalid_argument);
}
