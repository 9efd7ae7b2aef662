#include <cstdlib>
#include <stdexcept>

#include "kernel_impl.hpp"
#include "webmap/kernels.hpp"

namespace webmap::kernels {

std::string_view name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view text) {
    if (text == "scalar") return Isa::scalar;
    if (text == "avx2") return Isa::avx2;
    return std::nullopt;
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(WEBMAP_BUILD_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Isa best_available() {
    static const Isa chosen = [] {
        if (const char* env = std::getenv("WEBMAP_ISA")) {
            if (auto isa = parse_isa(env); isa && supported(*isa)) return *isa;
        }
        return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    }();
    return chosen;
}

void step_batch(std::span<double> x, std::span<double> p, const MapParams& params, Isa isa) {
    if (x.size() != p.size()) {
        throw std::invalid_argument("step_batch: x and p spans differ in length");
    }
    if (!supported(isa)) {
        throw std::invalid_argument("step_batch: ISA not supported on this machine");
    }
#if defined(WEBMAP_BUILD_AVX2)
    if (isa == Isa::avx2) {
        detail::step_batch_avx2(x.data(), p.data(), x.size(), params);
        return;
    }
#endif
    detail::step_batch_scalar(x.data(), p.data(), x.size(), params);
}

void sinh_batch(std::span<const double> in, std::span<double> out, Isa isa) {
    if (in.size() != out.size()) {
        throw std::invalid_argument("sinh_batch: input and output spans differ in length");
    }
    if (!supported(isa)) {
        throw std::invalid_argument("sinh_batch: ISA not supported on this machine");
    }
#if defined(WEBMAP_BUILD_AVX2)
    if (isa == Isa::avx2) {
        detail::sinh_batch_avx2(in.data(), out.data(), in.size());
        return;
    }
#endif
    detail::sinh_batch_scalar(in.data(), out.data(), in.size());
}

}  // namespace webmap::kernels
