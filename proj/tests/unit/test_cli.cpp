#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using webmap::cli::run;

namespace {

struct Captured {
    int code;
    std::string err;
};

Captured run_capture(const std::vector<std::string>& args) {
    std::ostringstream err, out;
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    const int code = run(args);
    std::cerr.rdbuf(old_err);
    std::cout.rdbuf(old_out);
    return {code, err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "webmap_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit with 2 and name the flag") {
    CHECK(run_capture({}).code == 2);
    CHECK(run_capture({"portrait", "--bogus"}).code == 2);
    auto r = run_capture({"portrait", "--q", "abc"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--q") != std::string::npos);
    r = run_capture({"portrait", "--K", "0.1", "--xi0", "1e3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--K") != std::string::npos);
    r = run_capture({"portrait", "--viewport=1,0,0,1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--viewport") != std::string::npos);
    r = run_capture({"portrait", "--mode", "grid", "--bins", "1,5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--bins") != std::string::npos);
    r = run_capture({"physical", "--L", "-1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--L") != std::string::npos);
    r = run_capture({"survive", "--K", "0.1", "--center", "30,0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--rc") != std::string::npos);
    CHECK(run_capture({"lyapunov", "--method", "magic"}).code == 2);
    CHECK(run_capture({"portrait", "--format", "png", "--kicks", "1"}).code == 2);
}

TEST_CASE("help and version succeed") {
    CHECK(run_capture({"--help"}).code == 0);
    CHECK(run_capture({"portrait", "--help"}).code == 0);
    CHECK(run_capture({"--version"}).code == 0);
}

TEST_CASE("numerical failures exit with 3") {
    auto r = run_capture({"fixed-points", "--q", "2", "--K", "0.5"});
    CHECK(r.code == 3);
    CHECK(r.err.find("numerical failure") != std::string::npos);
    // nu = omega makes the rotation angle vanish.
    CHECK(run_capture({"portrait", "--xi0", "10", "--nu-hz", "134000", "--kicks", "1"}).code == 3);
}

TEST_CASE("physical report") {
    const auto out = scratch("physical.json");
    REQUIRE(run_capture({"physical", "--xi0", "1e3", "--out", out.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["alpha"].get<double>() == doctest::Approx(4.9497e10).epsilon(1e-3));
    CHECK(j["q"].get<double>() == doctest::Approx(5.0));
    for (const char* key : {"k", "T", "K", "theta", "regime_ratio", "seed"}) CHECK(j.contains(key));
}

TEST_CASE("portrait output is byte-identical across runs, threads and kernels") {
    const auto a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
    const std::vector<std::string> base{"portrait", "--q", "6", "--K", "0.01", "--single-random", "--seed", "7",
                                        "--kicks", "2000", "--deterministic"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    REQUIRE(run_capture(with({"--out", a.string()})).code == 0);
    REQUIRE(run_capture(with({"--out", b.string()})).code == 0);
    REQUIRE(run_capture(with({"--out", c.string(), "--threads", "3"})).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
    const auto text = slurp(a);
    CHECK(text.rfind("# metadata: ", 0) == 0);
    CHECK(text.find("\"seed\":7") != std::string::npos);
    CHECK(text.find("\"batch_kernel\":\"scalar\"") != std::string::npos);
    CHECK(text.find("\nx,p\n") != std::string::npos);

    const auto d = scratch("d.csv");
    REQUIRE(run_capture({"portrait", "--q", "6", "--K", "0.01", "--single-random", "--seed", "8", "--kicks",
                         "2000", "--deterministic", "--out", d.string()})
                .code == 0);
    CHECK(slurp(a) != slurp(d));
}

TEST_CASE("grid formats") {
    const auto js = scratch("g.json"), bin = scratch("g.bin");
    const std::vector<std::string> args{"portrait", "--q", "4", "--K", "0", "--kicks", "100", "--mode", "grid",
                                        "--bins", "32,16", "--grid", "5"};
    auto a = args;
    a.insert(a.end(), {"--format", "json", "--out", js.string()});
    REQUIRE(run_capture(a).code == 0);
    auto b = args;
    b.insert(b.end(), {"--format", "bin", "--out", bin.string()});
    REQUIRE(run_capture(b).code == 0);
    const auto doc = nlohmann::json::parse(slurp(js));
    CHECK(doc["counts"].size() == 16);
    CHECK(doc["counts"][0].size() == 32);
    const auto raw = slurp(bin);
    CHECK(raw.size() - raw.find('\n') - 1 == 32 * 16 * 4);
}

TEST_CASE("config file supplies flags, command line wins") {
    const auto cfg = scratch("run.cfg");
    {
        std::ofstream f(cfg);
        f << "# fixed-point search\nK = 0.01\nq = 4\nradius = 0.1\ndeterministic = true\n";
    }
    const auto out1 = scratch("fp1.json"), out2 = scratch("fp2.json");
    REQUIRE(run_capture({"fixed-points", "--config", cfg.string(), "--out", out1.string()}).code == 0);
    auto j = nlohmann::json::parse(slurp(out1));
    CHECK(j["params"]["K"] == 0.01);
    CHECK(j["search_radius"] == 0.1);
    CHECK(j["deterministic"] == true);
    REQUIRE(run_capture({"fixed-points", "--config", cfg.string(), "--radius", "10", "--out", out2.string()}).code ==
            0);
    j = nlohmann::json::parse(slurp(out2));
    CHECK(j["search_radius"] == 10.0);
    CHECK(j["points"].size() == 3);

    const auto merged = webmap::cli::merge_config({"fixed-points", "--q=5"}, cfg.string());
    CHECK(merged.front() == "fixed-points");
    CHECK(std::find(merged.begin(), merged.end(), "--q=4") == merged.end());
    CHECK(std::find(merged.begin(), merged.end(), "--K=0.01") != merged.end());

    {
        std::ofstream f(scratch("bad.cfg"));
        f << "no equals sign here\n";
    }
    CHECK(run_capture({"fixed-points", "--config", scratch("bad.cfg").string()}).code == 2);
    CHECK(run_capture({"fixed-points", "--config", scratch("missing.cfg").string()}).code == 2);
}

TEST_CASE("survive reports both curves and the observed ordering") {
    const auto out = scratch("survive.json");
    REQUIRE(run_capture({"survive", "--q", "5", "--K", "0", "--K", "0.01", "--rc", "100", "--n", "50", "--ensemble",
                         "200", "--out", out.string()})
                .code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    REQUIRE(j["curves"].size() == 2);
    for (const auto& c : j["curves"][0]["p_s"]) CHECK(c.get<double>() == 1.0);
    CHECK(j.contains("higher_K_survives_more"));
    CHECK(j["seed"] == 1);
}

TEST_CASE("lyapunov and stability reports") {
    const auto ly = scratch("ly.json"), series = scratch("series.csv"), st = scratch("st.csv");
    REQUIRE(run_capture({"lyapunov", "--K", "0", "--kicks", "1000", "--out", ly.string(), "--series",
                         series.string()})
                .code == 0);
    const auto j = nlohmann::json::parse(slurp(ly));
    CHECK(j["estimates"].size() == 2);
    CHECK(std::abs(j["estimates"][0]["value"].get<double>()) < 1e-6);
    CHECK(slurp(series).find("kick,log_distance\n0,") != std::string::npos);

    REQUIRE(run_capture({"stability", "--points", "11", "--q", "5", "--out", st.string()}).code == 0);
    const auto text = slurp(st);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 11);
}
