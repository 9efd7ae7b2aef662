#include "webmap/portrait.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "webmap/ensemble.hpp"

namespace webmap {

namespace {

constexpr std::size_t kLaneBatch = 256;

// Per-chunk accumulation target; exactly one of cloud/grid is in use.
struct ChunkOutput {
    std::vector<std::vector<PhaseState>> orbits;
    std::optional<OccupancyGrid> grid;
    std::uint64_t escaped_orbits = 0;
    std::uint64_t escaped_tail = 0;
};

void run_orbits(const std::vector<PhaseState>& initials, std::size_t begin, std::size_t end,
                const MapParams& params, std::uint64_t n_kicks, kernels::Isa isa, ChunkOutput& out) {
    const bool keep_points = !out.grid.has_value();
    if (keep_points) out.orbits.resize(end - begin);

    std::vector<double> x;
    std::vector<double> p;
    std::vector<unsigned char> alive;
    for (std::size_t lo = begin; lo < end; lo += kLaneBatch) {
        const std::size_t hi = std::min(end, lo + kLaneBatch);
        const std::size_t lanes = hi - lo;
        x.resize(lanes);
        p.resize(lanes);
        alive.assign(lanes, 1);

        auto record = [&](std::size_t lane, PhaseState s) {
            if (keep_points) {
                out.orbits[lo + lane - begin].push_back(s);
            } else {
                out.grid->add(s);
            }
        };

        for (std::size_t i = 0; i < lanes; ++i) {
            x[i] = initials[lo + i].x;
            p[i] = initials[lo + i].p;
            if (keep_points) out.orbits[lo + i - begin].reserve(static_cast<std::size_t>(n_kicks) + 1);
            record(i, initials[lo + i]);
            if (kernels::lane_escaped(x[i], p[i])) {
                alive[i] = 0;
                ++out.escaped_orbits;
                out.escaped_tail += n_kicks;
            }
        }

        std::size_t live = 0;
        for (auto a : alive) live += a;
        for (std::uint64_t k = 1; k <= n_kicks && live > 0; ++k) {
            kernels::step_batch(x, p, params, isa);
            for (std::size_t i = 0; i < lanes; ++i) {
                if (!alive[i]) continue;
                if (!std::isfinite(x[i]) || !std::isfinite(p[i])) {
                    alive[i] = 0;
                    --live;
                    ++out.escaped_orbits;
                    out.escaped_tail += n_kicks - k + 1;
                    continue;
                }
                record(i, {x[i], p[i]});
                if (kernels::lane_escaped(x[i], p[i])) {
                    alive[i] = 0;
                    --live;
                    ++out.escaped_orbits;
                    out.escaped_tail += n_kicks - k;
                }
            }
        }
    }
}

PortraitResult run(const PortraitSpec& spec, const Viewport& viewport, std::size_t nx, std::size_t np,
                   const EngineOptions& options) {
    const auto initials = materialize(spec.initials);
    const bool grid_mode = spec.mode == PortraitMode::grid;

    const auto chunks = detail::split(initials.size(), options.threads);
    std::vector<ChunkOutput> outputs(chunks.size());
    if (grid_mode) {
        for (auto& o : outputs) o.grid.emplace(viewport, nx, np);
    }
    detail::run_chunks(chunks, [&](const detail::Chunk& c) {
        run_orbits(initials, c.begin, c.end, spec.params, spec.n_kicks, options.isa, outputs[c.index]);
    });

    PortraitResult result;
    result.n_orbits = initials.size();
    result.total_iterates = static_cast<std::uint64_t>(initials.size()) * (spec.n_kicks + 1);
    if (grid_mode) result.grid.emplace(viewport, nx, np);
    for (auto& o : outputs) {
        result.escaped_orbits += o.escaped_orbits;
        result.escaped_tail += o.escaped_tail;
        if (grid_mode) {
            result.grid->merge(*o.grid);
        } else {
            for (auto& orbit : o.orbits) {
                result.cloud.insert(result.cloud.end(), orbit.begin(), orbit.end());
                orbit = {};
            }
        }
    }
    if (grid_mode) {
        result.grid->escaped_orbits = result.escaped_orbits;
        result.grid->escaped_tail = result.escaped_tail;
        result.grid->total_points = result.total_iterates;
    }
    return result;
}

}  // namespace

std::vector<PhaseState> materialize(const InitialSpec& initials) {
    struct Visitor {
        std::vector<PhaseState> operator()(const ExplicitInitials& e) const { return e.states; }
        std::vector<PhaseState> operator()(const GridInitials& g) const {
            auto out = grid_ensemble(g.box.x_min, g.box.x_max, g.box.p_min, g.box.p_max, g.nx, g.np);
            if (g.include_origin) out.push_back({0.0, 0.0});
            return out;
        }
        std::vector<PhaseState> operator()(const RandomInitials& r) const {
            return box_ensemble(r.box.x_min, r.box.x_max, r.box.p_min, r.box.p_max, r.count, r.seed);
        }
    };
    return std::visit(Visitor{}, initials);
}

std::string describe(const InitialSpec& initials) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* e = std::get_if<ExplicitInitials>(&initials)) {
        os << "explicit:" << e->states.size();
    } else if (const auto* g = std::get_if<GridInitials>(&initials)) {
        os << "grid:" << g->nx << "x" << g->np << " over [" << g->box.x_min << "," << g->box.x_max << "]x["
           << g->box.p_min << "," << g->box.p_max << "]" << (g->include_origin ? " + origin" : "");
    } else if (const auto* r = std::get_if<RandomInitials>(&initials)) {
        os << "random:" << r->count << " in [" << r->box.x_min << "," << r->box.x_max << "]x[" << r->box.p_min
           << "," << r->box.p_max << "] seed " << r->seed;
    }
    return os.str();
}

void PortraitSpec::validate() const {
    if (!viewport.valid()) {
        throw std::invalid_argument("portrait viewport is degenerate");
    }
    if (mode == PortraitMode::grid && (nx < 2 || np < 2)) {
        throw std::invalid_argument("grid mode needs at least 2 bins per axis");
    }
    if (const auto* g = std::get_if<GridInitials>(&initials); g && (g->nx == 0 || g->np == 0)) {
        throw std::invalid_argument("initial-condition grid needs at least one node per axis");
    }
}

OccupancyGrid::OccupancyGrid(Viewport v, std::size_t nx_bins, std::size_t np_bins)
    : viewport(v), nx(nx_bins), np(np_bins), counts(nx_bins * np_bins, 0) {}

std::uint64_t OccupancyGrid::binned() const {
    std::uint64_t sum = saturated;
    for (auto c : counts) sum += c;
    return sum;
}

std::optional<std::size_t> bin_index(double v, double lo, double hi, std::size_t n) {
    if (!(v >= lo && v <= hi)) return std::nullopt;
    const auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(n));
    return std::min(idx, n - 1);
}

void OccupancyGrid::add(PhaseState s) {
    const auto ix = bin_index(s.x, viewport.x_min, viewport.x_max, nx);
    const auto ip = bin_index(s.p, viewport.p_min, viewport.p_max, np);
    if (!ix || !ip) {
        ++out_of_viewport;
        return;
    }
    auto& c = counts[*ip * nx + *ix];
    if (c == std::numeric_limits<std::uint32_t>::max()) {
        ++saturated;
    } else {
        ++c;
    }
}

void OccupancyGrid::merge(const OccupancyGrid& other) {
    if (other.nx != nx || other.np != np) {
        throw std::invalid_argument("OccupancyGrid::merge: bin layouts differ");
    }
    constexpr std::uint64_t cap = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::uint64_t sum = std::uint64_t{counts[i]} + other.counts[i];
        counts[i] = static_cast<std::uint32_t>(std::min(sum, cap));
        saturated += sum - std::min(sum, cap);
    }
    saturated += other.saturated;
    out_of_viewport += other.out_of_viewport;
}

PortraitResult render_portrait(const PortraitSpec& spec, const EngineOptions& options) {
    spec.validate();
    return run(spec, spec.viewport, spec.nx, spec.np, options);
}

OccupancyGrid magnify(const PortraitSpec& spec, const Viewport& window, std::size_t refine,
                      const EngineOptions& options) {
    spec.validate();
    if (!window.valid() || !spec.viewport.contains(window)) {
        throw std::invalid_argument("magnify: window must be a non-degenerate sub-viewport");
    }
    if (refine < 1) {
        throw std::invalid_argument("magnify: refine must be >= 1");
    }
    PortraitSpec zoomed = spec;
    zoomed.mode = PortraitMode::grid;
    return *run(zoomed, window, spec.nx * refine, spec.np * refine, options).grid;
}

OccupancyGrid bin_cloud(const std::vector<PhaseState>& cloud, const Viewport& viewport, std::size_t nx,
                        std::size_t np) {
    OccupancyGrid grid(viewport, nx, np);
    for (const auto& s : cloud) grid.add(s);
    grid.total_points = cloud.size();
    return grid;
}

}  // namespace webmap
