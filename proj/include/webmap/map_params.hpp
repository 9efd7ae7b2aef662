#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace webmap {

/// A point in dimensionless phase space: x = alpha * x_phys, p = alpha * p_phys / (m * omega).
struct PhaseState {
    double x = 0.0;
    double p = 0.0;

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Complex form z = x + i p of a PhaseState.
struct ComplexState {
    std::complex<double> z;

    static ComplexState from(PhaseState s) { return {{s.x, s.p}}; }
    PhaseState state() const { return {z.real(), z.imag()}; }
};

/// Thrown when an orbit leaves the representable range of the kick (|x| > escape threshold).
class EscapeError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Thrown when the rotation angle makes a formula singular (sin(theta) == 0).
class DegenerateRotation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// |x| beyond which sinh/cosh leave double range; a state there has escaped.
inline constexpr double kEscapeThreshold = 700.0;

/// Rational resonance order q = num / den, so that theta = 2 pi den / num.
struct Resonance {
    std::int64_t num = 1;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    /// Parses "5", "5/2". Throws std::invalid_argument on malformed input.
    static Resonance parse(std::string_view text);
};

/// Dimensionless kick strength K and rotation angle theta per kick.
///
/// When built from a resonance order the angle is derived from q, and exact
/// quarter-turn angles get exact cos/sin values.
class MapParams {
public:
    static MapParams from_theta(double K, double theta);
    static MapParams resonant(double K, Resonance q);
    static MapParams resonant(double K, std::int64_t q) { return resonant(K, Resonance{q, 1}); }

    double K() const { return K_; }
    double theta() const { return theta_; }
    double a() const { return a_; }
    double b() const { return b_; }
    const std::optional<Resonance>& q() const { return q_; }

    MapParams with_K(double K) const;

private:
    MapParams() = default;

    double K_ = 0.0;
    double theta_ = 0.0;
    double a_ = 1.0;
    double b_ = 0.0;
    std::optional<Resonance> q_;
};

}  // namespace webmap
