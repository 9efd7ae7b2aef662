#include <doctest.h>

#include <cstring>
#include <sstream>

#include "support.hpp"
#include "webmap/output.hpp"

using namespace webmap;
using webmap::test::Gen;

TEST_CASE("doubles round-trip through text") {
    Gen gen(61);
    for (int i = 0; i < 10000; ++i) {
        const double v = gen.real(-1e3, 1e3) * std::pow(10.0, gen.integer(-300, 300) / 10.0);
        REQUIRE(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("cloud csv layout") {
    std::ostringstream os;
    nlohmann::ordered_json meta;
    meta["seed"] = 3;
    const std::vector<PhaseState> cloud{{1.5, -2.0}, {0.1, 0.2}};
    write_cloud_csv(os, cloud, meta);
    CHECK(os.str() == "# metadata: {\"seed\":3}\nx,p\n1.5,-2\n0.1,0.2\n");
}

TEST_CASE("grid files") {
    OccupancyGrid g({-1.0, 1.0, -1.0, 1.0}, 3, 2);
    g.add({-0.9, -0.9});
    g.add({0.9, 0.9});
    g.add({0.9, 0.9});
    g.total_points = 3;

    std::ostringstream js;
    write_grid_json(js, g, {{"command", "portrait"}});
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["metadata"]["command"] == "portrait");
    CHECK(doc["grid"]["nx"] == 3);
    CHECK(doc["counts"].size() == 2);
    CHECK(doc["counts"][0][0] == 1);
    CHECK(doc["counts"][1][2] == 2);

    std::ostringstream bin;
    write_grid_binary(bin, g, {{"command", "portrait"}});
    const std::string raw = bin.str();
    const auto nl = raw.find('\n');
    REQUIRE(nl != std::string::npos);
    const auto header = nlohmann::json::parse(raw.substr(0, nl));
    CHECK(header["dtype"] == "uint32-le");
    const std::string body = raw.substr(nl + 1);
    REQUIRE(body.size() == 6 * 4);
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(body[i]); };
    CHECK(byte(0) == 1);
    CHECK(byte(5 * 4) == 2);
    CHECK(byte(5 * 4 + 1) == 0);
}

TEST_CASE("metadata helpers") {
    const auto pj = params_json(MapParams::resonant(0.01, Resonance{5, 2}));
    CHECK(pj["q"] == "5/2");
    CHECK(pj["K"] == 0.01);
    CHECK(params_json(MapParams::from_theta(0.1, 1.0))["q"].is_null());
    const auto prov = provenance_json(kernels::Isa::scalar);
    CHECK(prov["batch_kernel"] == "scalar");
    CHECK(prov["version"] == kVersion);
}
