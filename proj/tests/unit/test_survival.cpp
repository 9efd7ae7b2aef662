#include <doctest.h>

#include "webmap/ensemble.hpp"
#include "webmap/survival.hpp"

using namespace webmap;

namespace {

void check_shape(const SurvivalCurve& c) {
    REQUIRE_FALSE(c.p_s.empty());
    CHECK(c.p_s.front() == 1.0);
    for (std::size_t n = 1; n < c.p_s.size(); ++n) {
        REQUIRE(c.p_s[n] <= c.p_s[n - 1]);
        REQUIRE(c.p_s[n] >= 0.0);
    }
}

}  // namespace

TEST_CASE("no kicks, nobody leaves") {
    const auto ens = disk_ensemble({15.0, 0.0}, 0.1, 1000, 1);
    const auto c = survival_probability(ens, MapParams::resonant(0.0, 5), 100.0, 500);
    CHECK(c.p_s.size() == 501);
    for (double v : c.p_s) CHECK(v == 1.0);
    CHECK(c.time_to(0.5) == c.p_s.size());
}

TEST_CASE("survival curves are monotone for any configuration") {
    for (double K : {0.001, 0.01, 0.1}) {
        for (int q = 3; q <= 8; ++q) {
            const auto ens = disk_ensemble({2.0, 1.0}, 1.0, 500, 7);
            const auto c = survival_probability(ens, MapParams::resonant(K, q), 8.0, 300);
            check_shape(c);
            CHECK(c.n_total == 500);
        }
    }
}

TEST_CASE("survival does not depend on threads or kernel") {
    const auto ens = box_ensemble(-6.0, 6.0, -6.0, 6.0, 3000, 3);
    const auto params = MapParams::resonant(0.05, 5);
    const auto one = survival_probability(ens, params, 9.0, 400, {1, kernels::Isa::scalar});
    const auto four = survival_probability(ens, params, 9.0, 400, {4, kernels::Isa::scalar});
    CHECK(one.p_s == four.p_s);
    check_shape(one);
    CHECK(one.p_s.back() < 1.0);
    if (kernels::supported(kernels::Isa::avx2)) {
        const auto wide = survival_probability(ens, params, 9.0, 400, {3, kernels::Isa::avx2});
        CHECK(one.p_s == wide.p_s);
    }
}

TEST_CASE("time to a survival level") {
    SurvivalCurve c;
    c.p_s = {1.0, 0.9, 0.6, 0.5, 0.2};
    CHECK(c.time_to(0.5) == 3);
    CHECK(c.time_to(0.95) == 1);
    CHECK(c.time_to(0.1) == 5);
}

TEST_CASE("survival argument checks") {
    const auto params = MapParams::resonant(0.1, 5);
    CHECK_THROWS_AS(survival_probability({}, params, 20.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(survival_probability({{25.0, 0.0}}, params, 20.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(survival_probability({{1.0, 0.0}}, params, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(survival_probability({{1.0, 0.0}}, params, 20.0, 0), std::invalid_argument);
}
