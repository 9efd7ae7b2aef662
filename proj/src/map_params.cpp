#include "webmap/map_params.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

namespace webmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

void check_K(double K) {
    if (!std::isfinite(K) || K < 0.0) {
        throw std::invalid_argument("kick strength K must be finite and >= 0");
    }
}

}  // namespace

std::string Resonance::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Resonance Resonance::parse(std::string_view text) {
    auto slash = text.find('/');
    Resonance r;
    if (slash == std::string_view::npos) {
        r.num = parse_int(text);
        r.den = 1;
    } else {
        r.num = parse_int(text.substr(0, slash));
        r.den = parse_int(text.substr(slash + 1));
    }
    if (r.num <= 0 || r.den <= 0) {
        throw std::invalid_argument("resonance order must be a positive ratio: '" + std::string(text) + "'");
    }
    return r;
}

MapParams MapParams::from_theta(double K, double theta) {
    check_K(K);
    if (!std::isfinite(theta) || theta <= 0.0 || theta >= kTwoPi) {
        throw std::invalid_argument("rotation angle theta must lie in (0, 2pi)");
    }
    MapParams params;
    params.K_ = K;
    params.theta_ = theta;
    params.a_ = std::cos(theta);
    params.b_ = std::sin(theta);
    return params;
}

MapParams MapParams::resonant(double K, Resonance q) {
    check_K(K);
    if (q.num <= 0 || q.den <= 0) {
        throw std::invalid_argument("resonance order must be positive");
    }
    auto g = std::gcd(q.num, q.den);
    q.num /= g;
    q.den /= g;
    if (q.num <= q.den) {
        throw std::invalid_argument("resonance order q = " + q.str() + " gives theta >= 2pi; need q > 1");
    }

    MapParams params;
    params.K_ = K;
    params.q_ = q;
    params.theta_ = kTwoPi * static_cast<double>(q.den) / static_cast<double>(q.num);

    // Quarter turns get exact values so that q = 2 and q = 4 are exact rotations.
    if ((4 * q.den) % q.num == 0) {
        switch ((4 * q.den / q.num) % 4) {
            case 1: params.a_ = 0.0; params.b_ = 1.0; break;
            case 2: params.a_ = -1.0; params.b_ = 0.0; break;
            case 3: params.a_ = 0.0; params.b_ = -1.0; break;
            default: break;
        }
    } else {
        params.a_ = std::cos(params.theta_);
        params.b_ = std::sin(params.theta_);
    }
    return params;
}

MapParams MapParams::with_K(double K) const {
    check_K(K);
    MapParams copy = *this;
    copy.K_ = K;
    return copy;
}

}  // namespace webmap
