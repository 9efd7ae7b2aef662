#include "webmap/web_map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace webmap {

PhaseState kick(PhaseState s, double K) {
    if (!(std::abs(s.x) <= kEscapeThreshold) || !std::isfinite(s.p)) {
        throw EscapeError("state escaped: |x| = " + std::to_string(std::abs(s.x)));
    }
    const double p = s.p + K * std::sinh(s.x);
    if (!std::isfinite(p)) {
        throw EscapeError("kick overflowed");
    }
    return {s.x, p};
}

PhaseState rotate(PhaseState s, double a, double b) {
    return {a * s.x + b * s.p, a * s.p - b * s.x};
}

PhaseState rotate(PhaseState s, double theta) {
    return rotate(s, std::cos(theta), std::sin(theta));
}

PhaseState step(PhaseState s, const MapParams& params) {
    const PhaseState out = rotate(kick(s, params.K()), params.a(), params.b());
    if (!std::isfinite(out.x) || !std::isfinite(out.p)) {
        throw EscapeError("rotation overflowed");
    }
    return out;
}

ComplexState step_complex(ComplexState z, const MapParams& params) {
    const double x = z.z.real();
    if (!(std::abs(x) <= kEscapeThreshold) || !std::isfinite(z.z.imag())) {
        throw EscapeError("state escaped: |x| = " + std::to_string(std::abs(x)));
    }
    const std::complex<double> impulse(0.0, params.K() * std::sinh(x));
    const std::complex<double> phase(params.a(), -params.b());
    const std::complex<double> out = (z.z + impulse) * phase;
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
        throw EscapeError("complex step overflowed");
    }
    return {out};
}

OrbitRecord iterate(PhaseState initial, const MapParams& params, std::uint64_t n,
                    std::uint64_t record_every) {
    if (record_every == 0) {
        throw std::invalid_argument("record_every must be >= 1");
    }
    OrbitRecord rec{params, initial, {}, n, record_every, false, 0, initial};
    rec.states.reserve(static_cast<std::size_t>(n / record_every + 1));
    rec.states.push_back(initial);

    PhaseState s = initial;
    for (std::uint64_t k = 1; k <= n; ++k) {
        try {
            s = step(s, params);
        } catch (const EscapeError&) {
            rec.escaped = true;
            rec.escape_kick = k;
            break;
        }
        rec.last_state = s;
        if (k % record_every == 0) {
            rec.states.push_back(s);
        }
    }
    return rec;
}

}  // namespace webmap
