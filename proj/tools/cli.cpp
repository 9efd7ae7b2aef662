#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "webmap/ensemble.hpp"
#include "webmap/fixed_points.hpp"
#include "webmap/kernels.hpp"
#include "webmap/lyapunov.hpp"
#include "webmap/output.hpp"
#include "webmap/physical.hpp"
#include "webmap/portrait.hpp"
#include "webmap/stability.hpp"
#include "webmap/survival.hpp"
#include "webmap/symmetry.hpp"

namespace webmap::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Usage error tied to one flag.
class FlagError : public std::runtime_error {
public:
    FlagError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw FlagError(flag, "not a number: '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw FlagError(flag, "expected " + std::to_string(expected) + " comma-separated numbers");
    }
    return out;
}

Viewport parse_box(const std::string& text, const std::string& flag) {
    const auto v = parse_list(text, 4, flag);
    Viewport box{v[0], v[1], v[2], v[3]};
    if (!box.valid()) throw FlagError(flag, "box must satisfy x_min < x_max and p_min < p_max");
    return box;
}

json box_json(const Viewport& v) {
    return {{"x_min", v.x_min}, {"x_max", v.x_max}, {"p_min", v.p_min}, {"p_max", v.p_max}};
}

json state_json(PhaseState s) { return {{"x", s.x}, {"p", s.p}}; }

// ---------------------------------------------------------------------------
// Options shared by every subcommand.

struct CommonOptions {
    std::string out = "-";
    std::string format;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool deterministic = false;

    kernels::Isa isa() const { return deterministic ? kernels::Isa::scalar : kernels::best_available(); }
};

void add_common(CLI::App* app, CommonOptions& c, const std::string& default_format) {
    c.format = default_format;
    app->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
    app->add_option("--format", c.format, "Output format")->capture_default_str();
    app->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
    app->add_option("--threads", c.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
    app->add_flag("--deterministic", c.deterministic, "Scalar kernels and fixed reduction order");
}

// Map parameters, given either as (K, q | theta) or as a physical setup.
struct ParamOptions {
    std::vector<double> K;
    std::string q;
    std::optional<double> theta;

    std::optional<double> xi0;
    std::optional<double> nu_hz;
    double L = 2e-3;
    double delta_hz = 1e7;
    double mass = 50e-15;
    double omega_hz = 134e3;
    double omega_a_hz = 7e14;

    CLI::App* app = nullptr;
};

void add_map_params(CLI::App* app, ParamOptions& o, bool multi_K, std::optional<double> default_K,
                    const std::string& default_q) {
    o.app = app;
    if (default_K) o.K = {*default_K};
    o.q = default_q;
    auto* k = app->add_option("--K", o.K, "Dimensionless kick strength");
    if (!multi_K) k->expected(1);
    if (default_K) k->capture_default_str();
    app->add_option("--q", o.q, "Resonance order, integer or ratio (5, 5/2)")->capture_default_str();
    app->add_option("--theta", o.theta, "Rotation angle per kick in radians (instead of --q)");
    app->add_option("--xi0", o.xi0, "Drive amplitude xi0, rad/s (physical route)");
    app->add_option("--nu-hz", o.nu_hz, "Kick frequency nu/2pi, Hz (physical route)");
    app->add_option("--L", o.L, "Cavity length, m")->capture_default_str();
    app->add_option("--delta-hz", o.delta_hz, "Optical detuning delta/2pi, Hz")->capture_default_str();
    app->add_option("--mass", o.mass, "Effective membrane mass, kg")->capture_default_str();
    app->add_option("--omega-hz", o.omega_hz, "Membrane eigenfrequency omega/2pi, Hz")->capture_default_str();
    app->add_option("--omega-a-hz", o.omega_a_hz, "Cavity eigenfrequency omega_A/2pi, Hz")->capture_default_str();
}

bool given(const CLI::App* app, const char* flag) { return app->count(flag) > 0; }

OptomechanicalParams physical_from(const ParamOptions& o, std::optional<Resonance> q) {
    const std::pair<const char*, double> positive[] = {{"--L", o.L},
                                                       {"--delta-hz", o.delta_hz},
                                                       {"--mass", o.mass},
                                                       {"--omega-hz", o.omega_hz},
                                                       {"--omega-a-hz", o.omega_a_hz}};
    for (const auto& [flag, v] : positive) {
        if (!(v > 0.0)) throw FlagError(flag, "must be > 0");
    }
    if (o.xi0 && !(*o.xi0 >= 0.0)) throw FlagError("--xi0", "must be >= 0");
    if (o.nu_hz && !(*o.nu_hz > 0.0)) throw FlagError("--nu-hz", "must be > 0");

    OptomechanicalParams p;
    p.L = o.L;
    p.delta = kTwoPi * o.delta_hz;
    p.m = o.mass;
    p.omega = kTwoPi * o.omega_hz;
    p.omega_A = kTwoPi * o.omega_a_hz;
    p.xi0 = o.xi0.value_or(0.0);
    if (o.nu_hz) {
        p.nu = kTwoPi * *o.nu_hz;
    } else if (q) {
        p.nu = p.omega * q->value();
    }
    return p;
}

/// One MapParams per --K value (a single entry unless the command takes several).
std::vector<MapParams> resolve_params(const ParamOptions& o) {
    const bool physical = o.xi0.has_value() || o.nu_hz.has_value();
    const bool has_q = given(o.app, "--q");
    const bool has_theta = given(o.app, "--theta");
    if (has_q && has_theta) throw FlagError("--theta", "give either --q or --theta, not both");

    std::optional<Resonance> q;
    if (!has_theta) {
        try {
            q = Resonance::parse(o.q);
        } catch (const std::invalid_argument& e) {
            throw FlagError("--q", e.what());
        }
    }

    if (physical) {
        if (given(o.app, "--K")) throw FlagError("--K", "conflicts with the physical parameters (--xi0/--nu-hz)");
        if (has_theta) throw FlagError("--theta", "conflicts with the physical parameters (--xi0/--nu-hz)");
        if (o.nu_hz && has_q) throw FlagError("--q", "conflicts with --nu-hz");
        const auto scales = derive_scales(physical_from(o, q));
        return {scales.map_params()};
    }
    if (o.K.empty()) throw FlagError("--K", "kick strength is required");

    std::vector<MapParams> out;
    for (double K : o.K) {
        try {
            out.push_back(has_theta ? MapParams::from_theta(K, *o.theta) : MapParams::resonant(K, *q));
        } catch (const std::invalid_argument& e) {
            throw FlagError(has_theta ? "--theta" : (K < 0.0 ? "--K" : "--q"), e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output plumbing.

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path == "-") {
            os_ = &std::cout;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw FlagError("--out", "cannot open '" + path + "' for writing");
            os_ = file_.get();
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

json base_metadata(const std::string& command, const CommonOptions& c) {
    json m;
    m["command"] = command;
    m["seed"] = c.seed;
    m["deterministic"] = c.deterministic;
    m["provenance"] = provenance_json(c.isa());
    return m;
}

void require_format(const CommonOptions& c, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed) {
        if (c.format == f) return;
    }
    std::string list;
    for (const char* f : allowed) list += std::string(list.empty() ? "" : "|") + f;
    throw FlagError("--format", "expected one of " + list + ", got '" + c.format + "'");
}

// ---------------------------------------------------------------------------
// portrait / magnify

struct PortraitOptions {
    CommonOptions common;
    ParamOptions params;
    std::uint64_t kicks = 15000;
    std::string viewport = "-30,30,-30,30";
    std::string mode = "points";
    std::string bins = "512,512";
    std::size_t grid_n = 21;
    std::string init_box;
    std::optional<std::size_t> random;
    bool single_random = false;
    std::vector<std::string> init;
    bool symmetry = false;
    // magnify only
    std::string window;
    std::size_t refine = 4;
};

void add_portrait_options(CLI::App* app, PortraitOptions& o, bool magnify) {
    add_common(app, o.common, magnify ? "json" : "csv");
    add_map_params(app, o.params, false, 0.01, "4");
    app->add_option("--kicks", o.kicks, "Kicks per orbit")->capture_default_str();
    app->add_option("--viewport", o.viewport, "x_min,x_max,p_min,p_max (use --viewport=...)")->capture_default_str();
    app->add_option("--bins", o.bins, "Grid bins nx,np")->capture_default_str();
    app->add_option("--grid", o.grid_n, "Initial conditions on an N x N lattice plus the origin")->capture_default_str();
    app->add_option("--init-box", o.init_box, "Box for lattice/random initial conditions (default: viewport)");
    app->add_option("--random", o.random, "N initial conditions uniform in the init box");
    app->add_flag("--single-random", o.single_random, "One initial condition uniform in (-0.5, 0.5)^2");
    app->add_option("--init", o.init, "Explicit initial condition x,p (repeatable; use --init=x,p)");
    if (magnify) {
        app->add_option("--window", o.window, "Sub-viewport x_min,x_max,p_min,p_max")->required();
        app->add_option("--refine", o.refine, "Resolution factor inside the window")->capture_default_str();
    } else {
        app->add_option("--mode", o.mode, "points|grid")->capture_default_str();
        app->add_flag("--symmetry", o.symmetry, "Report the q-fold symmetry score of the cloud (points mode)");
    }
}

PortraitSpec build_portrait(const PortraitOptions& o, const MapParams& params, CLI::App* app) {
    PortraitSpec spec;
    spec.params = params;
    spec.n_kicks = o.kicks;
    spec.viewport = parse_box(o.viewport, "--viewport");
    const auto bins = parse_list(o.bins, 2, "--bins");
    if (bins[0] < 2 || bins[1] < 2 || bins[0] != std::floor(bins[0]) || bins[1] != std::floor(bins[1])) {
        throw FlagError("--bins", "bin counts must be integers >= 2");
    }
    spec.nx = static_cast<std::size_t>(bins[0]);
    spec.np = static_cast<std::size_t>(bins[1]);
    if (o.mode == "points") {
        spec.mode = PortraitMode::points;
    } else if (o.mode == "grid") {
        spec.mode = PortraitMode::grid;
    } else {
        throw FlagError("--mode", "expected points|grid");
    }

    const int sources = (o.single_random ? 1 : 0) + (o.random ? 1 : 0) + (o.init.empty() ? 0 : 1) +
                        (given(app, "--grid") ? 1 : 0);
    if (sources > 1) {
        throw FlagError(o.single_random ? "--single-random" : (o.random ? "--random" : "--init"),
                        "choose one source of initial conditions");
    }
    const Viewport init_box = o.init_box.empty() ? spec.viewport : parse_box(o.init_box, "--init-box");
    if (o.single_random) {
        spec.initials = RandomInitials{1, {-0.5, 0.5, -0.5, 0.5}, o.common.seed};
    } else if (o.random) {
        if (*o.random == 0) throw FlagError("--random", "need at least one initial condition");
        spec.initials = RandomInitials{*o.random, init_box, o.common.seed};
    } else if (!o.init.empty()) {
        ExplicitInitials e;
        for (const auto& s : o.init) {
            const auto v = parse_list(s, 2, "--init");
            e.states.push_back({v[0], v[1]});
        }
        spec.initials = e;
    } else {
        if (o.grid_n == 0) throw FlagError("--grid", "lattice needs at least one node per axis");
        spec.initials = GridInitials{init_box, o.grid_n, o.grid_n, true};
    }
    return spec;
}

json portrait_metadata(const std::string& command, const PortraitOptions& o, const PortraitSpec& spec) {
    json m = base_metadata(command, o.common);
    m["params"] = params_json(spec.params);
    m["kicks"] = spec.n_kicks;
    m["initials"] = describe(spec.initials);
    m["viewport"] = box_json(spec.viewport);
    m["mode"] = spec.mode == PortraitMode::points ? "points" : "grid";
    m["bins"] = {spec.nx, spec.np};
    return m;
}

void write_grid(const CommonOptions& c, const OccupancyGrid& grid, const json& meta) {
    require_format(c, {"json", "bin"});
    Sink sink(c.out);
    if (c.format == "json") {
        write_grid_json(sink.stream(), grid, meta);
    } else {
        write_grid_binary(sink.stream(), grid, meta);
    }
}

int cmd_portrait(const PortraitOptions& o, CLI::App* app) {
    const auto params = resolve_params(o.params).front();
    const auto spec = build_portrait(o, params, app);
    spec.validate();
    json meta = portrait_metadata("portrait", o, spec);
    const auto result = render_portrait(spec, {o.common.threads, o.common.isa()});
    meta["orbits"] = result.n_orbits;
    meta["escaped_orbits"] = result.escaped_orbits;

    if (spec.mode == PortraitMode::grid) {
        if (o.symmetry) throw FlagError("--symmetry", "needs --mode points");
        write_grid(o.common, *result.grid, meta);
    } else {
        require_format(o.common, {"csv"});
        if (o.symmetry) {
            const auto& q = spec.params.q();
            if (!q || q->den != 1 || q->num < 3) {
                throw FlagError("--symmetry", "needs an integer resonance order q >= 3");
            }
            const int qi = static_cast<int>(q->num);
            SymmetryOptions so;
            so.max_radius = std::min({-spec.viewport.x_min, spec.viewport.x_max, -spec.viewport.p_min,
                                      spec.viewport.p_max});
            so.seed = o.common.seed;
            so.threads = o.common.threads;
            if (!(so.max_radius > 0.0)) throw FlagError("--symmetry", "viewport must contain the origin");
            meta["symmetry"] = {{"q", qi},
                                {"score", symmetry_score(result.cloud, qi, so)},
                                {"score_q_plus_1", symmetry_score(result.cloud, qi + 1, so)},
                                {"max_radius", so.max_radius}};
        }
        Sink sink(o.common.out);
        write_cloud_csv(sink.stream(), result.cloud, meta);
    }
    return kSuccess;
}

int cmd_magnify(PortraitOptions o, CLI::App* app) {
    const auto params = resolve_params(o.params).front();
    o.mode = "grid";
    const auto spec = build_portrait(o, params, app);
    spec.validate();
    const Viewport window = parse_box(o.window, "--window");
    if (!spec.viewport.contains(window)) throw FlagError("--window", "must lie inside the viewport");
    if (o.refine < 1) throw FlagError("--refine", "must be >= 1");
    json meta = portrait_metadata("magnify", o, spec);
    meta["window"] = box_json(window);
    meta["refine"] = o.refine;
    const auto grid = magnify(spec, window, o.refine, {o.common.threads, o.common.isa()});
    write_grid(o.common, grid, meta);
    return kSuccess;
}

// ---------------------------------------------------------------------------
// lyapunov

struct LyapunovOptions {
    CommonOptions common;
    ParamOptions params;
    double x0 = 15.0;
    double p0 = 0.0;
    std::uint64_t kicks = 20000;
    std::string method = "both";
    double offset = 1e-5;
    double offset_angle = 0.0;
    double saturation = 0.1;
    std::string series;
};

json estimate_json(const LyapunovEstimate& e) {
    json j;
    j["method"] = to_string(e.method);
    j["value"] = e.value;
    j["kicks_used"] = e.n_kicks;
    j["kicks_requested"] = e.requested_kicks;
    j["escaped"] = e.escaped;
    if (e.saturation_kick) {
        j["saturation_kick"] = *e.saturation_kick;
    } else {
        j["saturation_kick"] = nullptr;
    }
    return j;
}

int cmd_lyapunov(const LyapunovOptions& o) {
    const auto params = resolve_params(o.params).front();
    if (o.method != "tangent" && o.method != "divergence" && o.method != "both") {
        throw FlagError("--method", "expected tangent|divergence|both");
    }
    if (o.kicks < 100) throw FlagError("--kicks", "need at least 100 kicks");
    if (!(o.offset > 0.0 && o.offset < 1.0)) throw FlagError("--offset", "must satisfy 0 < offset < 1");
    require_format(o.common, {"json"});

    const PhaseState initial{o.x0, o.p0};
    json report = base_metadata("lyapunov", o.common);
    report["params"] = params_json(params);
    report["initial"] = state_json(initial);
    report["kicks"] = o.kicks;

    std::optional<LyapunovEstimate> tangent;
    std::optional<DivergenceResult> divergence;
    json estimates = json::array();
    if (o.method != "divergence") {
        tangent = lyapunov_tangent(initial, params, o.kicks);
        estimates.push_back(estimate_json(*tangent));
    }
    if (o.method != "tangent") {
        const PhaseState offset{o.offset * std::cos(o.offset_angle), o.offset * std::sin(o.offset_angle)};
        divergence = lyapunov_divergence(initial, offset, params, o.kicks, {o.saturation});
        json e = estimate_json(divergence->estimate);
        e["offset"] = state_json(offset);
        e["saturation_fraction"] = o.saturation;
        e["log_distance"] = divergence->log_distance;
        estimates.push_back(std::move(e));
    }
    report["estimates"] = std::move(estimates);
    if (tangent && divergence) {
        report["agreement_ratio"] =
            tangent->value != 0.0 ? json(divergence->estimate.value / tangent->value) : json(nullptr);
    }

    if (!o.series.empty()) {
        if (!divergence) throw FlagError("--series", "needs --method divergence or both");
        std::ofstream series(o.series, std::ios::binary);
        if (!series) throw FlagError("--series", "cannot open '" + o.series + "' for writing");
        series << "# metadata: " << report["params"].dump() << '\n' << "kick,log_distance\n";
        for (std::size_t k = 0; k < divergence->log_distance.size(); ++k) {
            series << k << ',' << format_double(divergence->log_distance[k]) << '\n';
        }
    }
    Sink sink(o.common.out);
    sink.stream() << report.dump(2) << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------------------
// survive

struct SurviveOptions {
    CommonOptions common;
    ParamOptions params;
    double rc = 20.0;
    std::uint64_t n = 2000;
    std::size_t ensemble = 10000;
    std::string center = "15,0";
    double radius = 0.1;
};

int cmd_survive(const SurviveOptions& o) {
    const auto all = resolve_params(o.params);
    require_format(o.common, {"json", "csv"});
    if (!(o.rc > 0.0)) throw FlagError("--rc", "must be > 0");
    if (o.n < 1) throw FlagError("--n", "must be >= 1");
    if (o.ensemble < 1) throw FlagError("--ensemble", "must be >= 1");
    if (!(o.radius >= 0.0)) throw FlagError("--radius", "must be >= 0");
    const auto c = parse_list(o.center, 2, "--center");
    const PhaseState center{c[0], c[1]};
    if (std::hypot(center.x, center.p) + o.radius >= o.rc) {
        throw FlagError("--rc", "ensemble disk must lie inside r < rc");
    }
    const auto ensemble = disk_ensemble(center, o.radius, o.ensemble, o.common.seed);

    std::vector<SurvivalCurve> curves;
    for (const auto& params : all) {
        curves.push_back(survival_probability(ensemble, params, o.rc, o.n, {o.common.threads, o.common.isa()}));
    }

    json meta = base_metadata("survive", o.common);
    meta["K"] = o.params.K;
    meta["params"] = params_json(all.front());
    meta["r_c"] = o.rc;
    meta["n_max"] = o.n;
    meta["ensemble"] = {{"size", o.ensemble}, {"center", state_json(center)}, {"radius", o.radius},
                        {"distribution", "uniform in disk"}};

    // Curves are ranked by the area under p_s.
    json ordering = json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        double area = 0.0;
        for (double v : curves[i].p_s) area += v;
        ordering.push_back({{"K", all[i].K()},
                            {"final", curves[i].p_s.back()},
                            {"mean_survival", area / static_cast<double>(curves[i].p_s.size())},
                            {"half_life", curves[i].time_to(0.5)}});
    }
    meta["summary"] = ordering;
    if (curves.size() >= 2) {
        const double lo_K = all.front().K(), hi_K = all.back().K();
        const double lo = ordering.front()["mean_survival"], hi = ordering.back()["mean_survival"];
        meta["higher_K_survives_more"] =
            (hi_K > lo_K) ? json(hi > lo ? "yes" : (hi == lo ? "tie" : "no")) : json("n/a: list K ascending");
    }

    Sink sink(o.common.out);
    if (o.common.format == "json") {
        json curves_json = json::array();
        for (std::size_t i = 0; i < curves.size(); ++i) {
            curves_json.push_back({{"K", all[i].K()}, {"p_s", curves[i].p_s}});
        }
        meta["curves"] = std::move(curves_json);
        sink.stream() << meta.dump(2) << '\n';
    } else {
        auto& os = sink.stream();
        os << "# metadata: " << meta.dump() << '\n' << "n";
        for (const auto& p : all) os << ",p_s_K=" << format_double(p.K());
        os << '\n';
        for (std::size_t n = 0; n <= o.n; ++n) {
            os << n;
            for (const auto& curve : curves) os << ',' << format_double(curve.p_s[n]);
            os << '\n';
        }
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// stability

struct StabilityOptions {
    CommonOptions common;
    double K = 0.5;
    std::vector<std::string> q = {"3", "4", "5", "6", "7", "8"};
    double x_min = -10.0;
    double x_max = 10.0;
    double p = 0.0;
    std::size_t points = 2001;
};

int cmd_stability(const StabilityOptions& o) {
    require_format(o.common, {"csv", "json"});
    if (o.points < 1) throw FlagError("--points", "must be >= 1");
    if (!(o.x_max >= o.x_min)) throw FlagError("--x-max", "must be >= --x-min");
    std::vector<MapParams> all;
    for (const auto& q : o.q) {
        try {
            all.push_back(MapParams::resonant(o.K, Resonance::parse(q)));
        } catch (const std::invalid_argument& e) {
            throw FlagError(o.K < 0.0 ? "--K" : "--q", e.what());
        }
    }

    json meta = base_metadata("stability", o.common);
    meta["K"] = o.K;
    meta["q"] = o.q;
    meta["x_range"] = {o.x_min, o.x_max};
    meta["p"] = o.p;
    meta["points_per_q"] = o.points;

    struct Row {
        std::string q;
        double x;
        JacobianMatrix J;
        EigenPair eig;
    };
    std::vector<Row> rows;
    double worst_reciprocity = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        for (std::size_t i = 0; i < o.points; ++i) {
            const double x = o.points == 1 ? o.x_min
                                           : o.x_min + (o.x_max - o.x_min) * static_cast<double>(i) /
                                                           static_cast<double>(o.points - 1);
            const auto J = jacobian({x, o.p}, all[k]);
            const auto eig = eigenvalues(J);
            worst_reciprocity = std::max(worst_reciprocity, std::abs(eig.lambda_plus * eig.lambda_minus - 1.0));
            rows.push_back({all[k].q()->str(), x, J, eig});
        }
    }
    meta["max_reciprocity_error"] = worst_reciprocity;

    Sink sink(o.common.out);
    auto& os = sink.stream();
    if (o.common.format == "csv") {
        os << "# metadata: " << meta.dump() << '\n';
        os << "q,x,trace,determinant,lambda_plus_re,lambda_plus_im,lambda_minus_re,lambda_minus_im,"
              "product_re,product_im,class\n";
        for (const auto& r : rows) {
            const auto prod = r.eig.lambda_plus * r.eig.lambda_minus;
            os << r.q << ',' << format_double(r.x) << ',' << format_double(r.eig.trace) << ','
               << format_double(r.J.determinant()) << ',' << format_double(r.eig.lambda_plus.real()) << ','
               << format_double(r.eig.lambda_plus.imag()) << ',' << format_double(r.eig.lambda_minus.real()) << ','
               << format_double(r.eig.lambda_minus.imag()) << ',' << format_double(prod.real()) << ','
               << format_double(prod.imag()) << ',' << to_string(r.eig.classification) << '\n';
        }
    } else {
        json list = json::array();
        for (const auto& r : rows) {
            const auto prod = r.eig.lambda_plus * r.eig.lambda_minus;
            list.push_back({{"q", r.q},
                            {"x", r.x},
                            {"trace", r.eig.trace},
                            {"determinant", r.J.determinant()},
                            {"lambda_plus", {r.eig.lambda_plus.real(), r.eig.lambda_plus.imag()}},
                            {"lambda_minus", {r.eig.lambda_minus.real(), r.eig.lambda_minus.imag()}},
                            {"product", {prod.real(), prod.imag()}},
                            {"class", to_string(r.eig.classification)}});
        }
        meta["rows"] = std::move(list);
        os << meta.dump(2) << '\n';
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// fixed-points

struct FixedPointOptionsCli {
    CommonOptions common;
    ParamOptions params;
    double radius = 10.0;
    double tolerance = 1e-10;
};

int cmd_fixed_points(const FixedPointOptionsCli& o) {
    const auto params = resolve_params(o.params).front();
    require_format(o.common, {"json"});
    if (!(o.radius > 0.0)) throw FlagError("--radius", "must be > 0");
    if (!(o.tolerance > 0.0)) throw FlagError("--tolerance", "must be > 0");

    FixedPointOptions opts;
    opts.search_radius = o.radius;
    opts.tolerance = o.tolerance;
    const auto search = find_fixed_points(params, opts);

    json report = base_metadata("fixed-points", o.common);
    report["params"] = params_json(params);
    report["search_radius"] = o.radius;
    report["tolerance"] = o.tolerance;
    report["printed_line_slope"] = fixed_line_slope(params);
    report["verified_line_slope"] = exact_fixed_line_slope(params);

    json points = json::array();
    double max_residual = 0.0;
    double max_collinearity = 0.0;
    const FixedPoint* ref = nullptr;
    for (const auto& fp : search.points) {
        points.push_back({{"x", fp.state.x},
                          {"p", fp.state.p},
                          {"residual", fp.residual},
                          {"trace", fp.trace},
                          {"stability", to_string(fp.stability)}});
        max_residual = std::max(max_residual, fp.residual);
        if (fp.state.x == 0.0 && fp.state.p == 0.0) continue;
        if (ref == nullptr) {
            ref = &fp;
            continue;
        }
        const double cross = ref->state.x * fp.state.p - ref->state.p * fp.state.x;
        const double norm = std::hypot(ref->state.x, ref->state.p) * std::hypot(fp.state.x, fp.state.p);
        max_collinearity = std::max(max_collinearity, std::abs(cross) / norm);
    }
    report["points"] = std::move(points);
    report["rejected_roots"] = search.rejected;
    report["max_residual"] = max_residual;
    report["max_collinearity_deviation"] = max_collinearity;

    Sink sink(o.common.out);
    sink.stream() << report.dump(2) << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------------------
// physical

struct PhysicalOptions {
    CommonOptions common;
    ParamOptions params;
    double x_max = 20.0;
};

int cmd_physical(const PhysicalOptions& o) {
    require_format(o.common, {"json"});
    if (given(o.params.app, "--K")) throw FlagError("--K", "physical takes the physical parameters, not K");
    if (given(o.params.app, "--theta")) throw FlagError("--theta", "give --nu-hz or --q");
    if (o.params.nu_hz && given(o.params.app, "--q")) throw FlagError("--q", "conflicts with --nu-hz");

    std::optional<Resonance> q;
    try {
        q = Resonance::parse(o.params.q);
    } catch (const std::invalid_argument& e) {
        throw FlagError("--q", e.what());
    }
    const auto phys = physical_from(o.params, q);
    const auto scales = derive_scales(phys);
    const auto regime = check_regime(phys, o.x_max);

    json report = base_metadata("physical", o.common);
    report["inputs"] = {{"L_m", phys.L},
                        {"delta_rad_s", phys.delta},
                        {"m_kg", phys.m},
                        {"omega_rad_s", phys.omega},
                        {"omega_A_rad_s", phys.omega_A},
                        {"xi0_rad_s", phys.xi0},
                        {"nu_rad_s", phys.nu}};
    report["alpha"] = scales.alpha;
    report["k"] = scales.k;
    report["T"] = scales.T;
    report["K"] = scales.K;
    report["theta"] = scales.theta;
    report["q"] = scales.q;
    report["x_max_dimless"] = o.x_max;
    report["x_max_m"] = regime.x_max_m;
    report["regime_length_m"] = regime.length_scale;
    report["regime_ratio"] = regime.ratio;
    report["regime_warn"] = regime.warn;
    report["regime_warn_threshold"] = kRegimeWarnRatio;
    if (regime.warn) {
        std::cerr << "warning: amplitude " << o.x_max << " is " << regime.ratio
                  << " of |delta/omega_A| L; the cosh approximation needs this ratio << 1\n";
    }

    Sink sink(o.common.out);
    sink.stream() << report.dump(2) << '\n';
    return kSuccess;
}

std::vector<std::string> extract_config_path(std::vector<std::string>& args, std::string& path) {
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw FlagError("--config", "missing file path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    return rest;
}

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FlagError("--config", "cannot read '" + path + "'");

    auto present = [&](const std::string& key) {
        const std::string flag = "--" + key;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };

    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FlagError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        if (key.empty() || present(key)) continue;
        if (value == "true") {
            tokens.push_back("--" + key);
        } else if (value != "false") {
            tokens.push_back("--" + key + "=" + value);
        }
    }

    // Flags from the file go right after the subcommand name.
    std::vector<std::string> merged;
    if (!args.empty()) merged.push_back(args.front());
    merged.insert(merged.end(), tokens.begin(), tokens.end());
    if (args.size() > 1) merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

int run(const std::vector<std::string>& raw_args) {
    CLI::App app{"Kicked membrane stochastic web map: portraits, stability, Lyapunov exponents, survival", "webmap"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    PortraitOptions portrait_opts;
    PortraitOptions magnify_opts;
    LyapunovOptions lyapunov_opts;
    SurviveOptions survive_opts;
    StabilityOptions stability_opts;
    FixedPointOptionsCli fixed_opts;
    PhysicalOptions physical_opts;

    auto* portrait = app.add_subcommand("portrait", "Stroboscopic phase portrait (points or occupancy grid)");
    add_portrait_options(portrait, portrait_opts, false);

    auto* magnify_cmd = app.add_subcommand("magnify", "Occupancy grid of a window of the portrait at finer bins");
    add_portrait_options(magnify_cmd, magnify_opts, true);

    auto* lyapunov = app.add_subcommand("lyapunov", "Largest Lyapunov exponent (tangent map and/or divergence)");
    add_common(lyapunov, lyapunov_opts.common, "json");
    add_map_params(lyapunov, lyapunov_opts.params, false, 0.5, "5");
    lyapunov->add_option("--x0", lyapunov_opts.x0)->capture_default_str();
    lyapunov->add_option("--p0", lyapunov_opts.p0)->capture_default_str();
    lyapunov->add_option("--kicks", lyapunov_opts.kicks)->capture_default_str();
    lyapunov->add_option("--method", lyapunov_opts.method, "tangent|divergence|both")->capture_default_str();
    lyapunov->add_option("--offset", lyapunov_opts.offset, "Initial separation")->capture_default_str();
    lyapunov->add_option("--offset-angle", lyapunov_opts.offset_angle, "Direction of the separation, rad")
        ->capture_default_str();
    lyapunov->add_option("--saturation", lyapunov_opts.saturation, "Fit window ends at |delta| > f * radius")
        ->capture_default_str();
    lyapunov->add_option("--series", lyapunov_opts.series, "Write ln|delta(n)| as CSV to this path");

    auto* survive = app.add_subcommand("survive", "Survival probability of an ensemble inside r < rc");
    add_common(survive, survive_opts.common, "json");
    add_map_params(survive, survive_opts.params, true, std::nullopt, "5");
    survive->add_option("--rc", survive_opts.rc, "Escape radius")->capture_default_str();
    survive->add_option("--n", survive_opts.n, "Kicks")->capture_default_str();
    survive->add_option("--ensemble", survive_opts.ensemble, "Ensemble size")->capture_default_str();
    survive->add_option("--center", survive_opts.center, "Ensemble disk center x,p")->capture_default_str();
    survive->add_option("--radius", survive_opts.radius, "Ensemble disk radius")->capture_default_str();

    auto* stability = app.add_subcommand("stability", "Jacobian eigenvalues along x for several q");
    add_common(stability, stability_opts.common, "csv");
    stability->add_option("--K", stability_opts.K)->capture_default_str();
    stability->add_option("--q", stability_opts.q, "Resonance orders (repeatable)")->capture_default_str();
    stability->add_option("--x-min", stability_opts.x_min)->capture_default_str();
    stability->add_option("--x-max", stability_opts.x_max)->capture_default_str();
    stability->add_option("--p", stability_opts.p, "Momentum of the sampled states")->capture_default_str();
    stability->add_option("--points", stability_opts.points, "Samples per q")->capture_default_str();

    auto* fixed = app.add_subcommand("fixed-points", "Fixed points of the map and their stability");
    add_common(fixed, fixed_opts.common, "json");
    add_map_params(fixed, fixed_opts.params, false, 0.01, "4");
    fixed->add_option("--radius", fixed_opts.radius, "Search |x| <= radius")->capture_default_str();
    fixed->add_option("--tolerance", fixed_opts.tolerance, "Residual bound")->capture_default_str();

    auto* physical = app.add_subcommand("physical", "Dimensionless parameters from the optomechanical setup");
    add_common(physical, physical_opts.common, "json");
    add_map_params(physical, physical_opts.params, false, std::nullopt, "5");
    physical->add_option("--x-max", physical_opts.x_max, "Dimensionless amplitude for the regime check")
        ->capture_default_str();

    try {
        std::vector<std::string> args = raw_args;
        std::string config;
        args = extract_config_path(args, config);
        if (!config.empty()) args = merge_config(args, config);

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (*portrait) return cmd_portrait(portrait_opts, portrait);
        if (*magnify_cmd) return cmd_magnify(magnify_opts, magnify_cmd);
        if (*lyapunov) return cmd_lyapunov(lyapunov_opts);
        if (*survive) return cmd_survive(survive_opts);
        if (*stability) return cmd_stability(stability_opts);
        if (*fixed) return cmd_fixed_points(fixed_opts);
        if (*physical) return cmd_physical(physical_opts);
        return kUsageError;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const EscapeError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DegenerateRotation& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace webmap::cli
