#include "webmap/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"
#include "webmap/ensemble.hpp"

namespace webmap {

PointGrid::PointGrid(std::span<const PhaseState> points) {
    if (points.empty()) {
        throw std::invalid_argument("PointGrid: empty point set");
    }
    double x_lo = points[0].x, x_hi = points[0].x;
    double p_lo = points[0].p, p_hi = points[0].p;
    for (const auto& s : points) {
        x_lo = std::min(x_lo, s.x);
        x_hi = std::max(x_hi, s.x);
        p_lo = std::min(p_lo, s.p);
        p_hi = std::max(p_hi, s.p);
    }
    const double width = std::max(x_hi - x_lo, p_hi - p_lo);
    // About two points per cell for area-filling clouds, capped at 4N cells.
    const double n = static_cast<double>(points.size());
    h_ = width > 0.0 ? std::max(width / std::sqrt(n / 2.0), width / 2048.0) : 1.0;
    x0_ = x_lo;
    p0_ = p_lo;
    nx_ = static_cast<std::size_t>((x_hi - x_lo) / h_) + 1;
    np_ = static_cast<std::size_t>((p_hi - p_lo) / h_) + 1;

    std::vector<std::size_t> cell(points.size());
    start_.assign(nx_ * np_ + 1, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        cell[i] = cell_of(points[i].p, p0_, np_) * nx_ + cell_of(points[i].x, x0_, nx_);
        ++start_[cell[i] + 1];
    }
    for (std::size_t c = 0; c < nx_ * np_; ++c) start_[c + 1] += start_[c];
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    xs_.resize(points.size());
    ps_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t slot = fill[cell[i]]++;
        xs_[slot] = points[i].x;
        ps_[slot] = points[i].p;
    }
}

std::size_t PointGrid::cell_of(double v, double lo, std::size_t n) const {
    const double f = std::floor((v - lo) / h_);
    if (!(f > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(f), n - 1);
}

double PointGrid::nearest_distance(PhaseState q) const {
    const auto ci = static_cast<std::ptrdiff_t>(cell_of(q.x, x0_, nx_));
    const auto cj = static_cast<std::ptrdiff_t>(cell_of(q.p, p0_, np_));
    const auto nx = static_cast<std::ptrdiff_t>(nx_);
    const auto np = static_cast<std::ptrdiff_t>(np_);
    const std::ptrdiff_t max_ring = std::max(nx, np);

    double best2 = std::numeric_limits<double>::infinity();
    auto scan = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
        if (i < 0 || j < 0 || i >= nx || j >= np) return;
        const std::size_t c = static_cast<std::size_t>(j * nx + i);
        for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
            const double dx = xs_[k] - q.x;
            const double dp = ps_[k] - q.p;
            best2 = std::min(best2, dx * dx + dp * dp);
        }
    };

    // Rings of cells at growing Chebyshev distance from the query's (clamped)
    // cell. Every cell beyond ring R lies at least R * h from the query, also
    // for queries outside the grid, since the grid box is convex.
    for (std::ptrdiff_t R = 0; R <= max_ring; ++R) {
        if (R == 0) {
            scan(ci, cj);
        } else {
            for (std::ptrdiff_t d = -R; d <= R; ++d) {
                scan(ci + d, cj - R);
                scan(ci + d, cj + R);
            }
            for (std::ptrdiff_t d = -R + 1; d <= R - 1; ++d) {
                scan(ci - R, cj + d);
                scan(ci + R, cj + d);
            }
        }
        const double bound = static_cast<double>(R) * h_;
        if (best2 <= bound * bound) break;
    }
    return std::sqrt(best2);
}

double symmetry_score(std::span<const PhaseState> cloud, int q, const SymmetryOptions& options) {
    if (q < 3) {
        throw std::invalid_argument("symmetry_score: q must be an integer >= 3");
    }
    const double r2max = options.max_radius * options.max_radius;
    std::vector<PhaseState> half_a;
    std::vector<PhaseState> half_b;
    UniformSource rng(options.seed);
    std::size_t kept = 0;
    for (const auto& s : cloud) {
        if (!std::isfinite(s.x) || !std::isfinite(s.p) || s.x * s.x + s.p * s.p > r2max) continue;
        ++kept;
        (rng.next() < 0.5 ? half_a : half_b).push_back(s);
    }
    if (kept < 1000) {
        throw std::invalid_argument("symmetry_score: need at least 1000 points inside max_radius");
    }
    const bool degenerate = std::all_of(half_a.begin(), half_a.end(), [&](const PhaseState& s) {
                                return s == half_a.front();
                            }) &&
                            std::all_of(half_b.begin(), half_b.end(), [&](const PhaseState& s) {
                                return s == half_a.front();
                            });
    if (degenerate || half_a.empty() || half_b.empty()) {
        throw std::invalid_argument("symmetry_score: degenerate cloud");
    }

    const PointGrid grid(half_b);
    const double angle = 2.0 * std::numbers::pi / q;
    const double c = std::cos(angle);
    const double s = std::sin(angle);

    std::vector<double> d_self(half_a.size());
    std::vector<double> d_rot(half_a.size());
    detail::run_chunks(detail::split(half_a.size(), options.threads), [&](const detail::Chunk& ch) {
        for (std::size_t i = ch.begin; i < ch.end; ++i) {
            const PhaseState a = half_a[i];
            d_self[i] = grid.nearest_distance(a);
            d_rot[i] = grid.nearest_distance({c * a.x - s * a.p, s * a.x + c * a.p});
        }
    });

    double sum_self = 0.0;
    double sum_rot = 0.0;
    for (std::size_t i = 0; i < half_a.size(); ++i) {
        sum_self += d_self[i];
        sum_rot += d_rot[i];
    }
    if (!(sum_self > 0.0)) {
        throw std::invalid_argument("symmetry_score: cloud halves coincide point for point");
    }
    return sum_rot / sum_self;
}

}  // namespace webmap
