#pragma once

#include <cstdint>
#include <vector>

#include "webmap/map_params.hpp"

namespace webmap {

/// Momentum impulse p -> p + K sinh(x). Throws EscapeError when |x| exceeds
/// kEscapeThreshold or the result is not finite.
PhaseState kick(PhaseState s, double K);

/// Free harmonic evolution over angle theta: (a x + b p, a p - b x).
PhaseState rotate(PhaseState s, double theta);
PhaseState rotate(PhaseState s, double a, double b);

/// One kick followed by one free rotation; the stroboscopic web map.
PhaseState step(PhaseState s, const MapParams& params);

/// The same map in complex form, z' = (z + i K sinh x) e^{-i theta}.
ComplexState step_complex(ComplexState z, const MapParams& params);

struct OrbitRecord {
    MapParams params;
    PhaseState initial;
    std::vector<PhaseState> states;  ///< initial state, then every stride-th iterate
    std::uint64_t n_kicks = 0;       ///< requested kicks
    std::uint64_t stride = 1;
    bool escaped = false;
    std::uint64_t escape_kick = 0;   ///< 1-based index of the kick that overflowed
    PhaseState last_state;           ///< last finite state reached

    std::uint64_t completed_kicks() const { return escaped ? escape_kick - 1 : n_kicks; }
};

/// Iterates n kicks from initial, keeping every record_every-th state. Escape
/// ends the orbit early and is recorded, never thrown.
OrbitRecord iterate(PhaseState initial, const MapParams& params, std::uint64_t n,
                    std::uint64_t record_every = 1);

}  // namespace webmap
