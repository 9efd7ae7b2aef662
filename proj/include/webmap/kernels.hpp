#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string_view>

#include "webmap/map_params.hpp"

// Batch stepping kernels for ensembles of orbits stored as separate x and p
// arrays. Every ISA variant evaluates the same operation sequence (same
// polynomial sinh, same fused multiply-adds), so results are bit-identical
// across variants and the choice of ISA never changes an output file.

namespace webmap::kernels {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);
std::optional<Isa> parse_isa(std::string_view text);

/// Compiled in and supported by the running CPU.
bool supported(Isa isa);

/// Widest supported variant, overridable with WEBMAP_ISA=scalar|avx2.
Isa best_available();

/// One step of the web map for every lane. Lanes whose |x| exceeds
/// kEscapeThreshold, or whose p is not finite, are left untouched.
void step_batch(std::span<double> x, std::span<double> p, const MapParams& params,
                Isa isa = best_available());

/// Kernel sinh on a batch; exposed for accuracy and equivalence tests.
void sinh_batch(std::span<const double> in, std::span<double> out, Isa isa = best_available());

/// Scalar form of the kernel sinh, valid for |x| <= kEscapeThreshold.
double kernel_sinh(double x);

inline bool lane_escaped(double x, double p) {
    return !(std::abs(x) <= kEscapeThreshold) || !std::isfinite(p);
}

}  // namespace webmap::kernels
