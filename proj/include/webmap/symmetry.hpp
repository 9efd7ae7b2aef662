#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "webmap/map_params.hpp"

namespace webmap {

/// Uniform-grid index over a fixed point set for nearest-neighbour queries.
class PointGrid {
public:
    explicit PointGrid(std::span<const PhaseState> points);

    /// Distance from q to the nearest indexed point.
    double nearest_distance(PhaseState q) const;

    std::size_t size() const { return xs_.size(); }

private:
    std::size_t cell_of(double v, double lo, std::size_t n) const;

    double x0_ = 0.0, p0_ = 0.0, h_ = 1.0;
    std::size_t nx_ = 1, np_ = 1;
    std::vector<std::size_t> start_;  // CSR offsets, nx * np + 1
    std::vector<double> xs_, ps_;       // points ordered by cell
};

inline constexpr std::uint64_t kSymmetrySplitSeed = 0x5eed5eedULL;

struct SymmetryOptions {
    double max_radius = 1e6;  ///< points farther from the origin are ignored
    std::uint64_t seed = kSymmetrySplitSeed;
    unsigned threads = 1;
};

/// How far the cloud is from being invariant under rotation by 2 pi / q.
///
/// The cloud is split at random into halves A and B. The score is
/// mean_{a in A} d(R a, B) / mean_{a in A} d(a, B), with R the rotation and d
/// the nearest-neighbour distance. Both means see point sets of equal density,
/// so a symmetric cloud scores about 1.
///
/// Only finite points with radius <= max_radius take part (a disk keeps the
/// comparison rotation-invariant). Requires at least 1000 such points and
/// q >= 3; rejects a cloud of identical points.
double symmetry_score(std::span<const PhaseState> cloud, int q, const SymmetryOptions& options = {});

}  // namespace webmap
