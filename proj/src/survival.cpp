#include "webmap/survival.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace webmap {

std::size_t SurvivalCurve::time_to(double level) const {
    for (std::size_t n = 0; n < p_s.size(); ++n) {
        if (p_s[n] <= level) return n;
    }
    return p_s.size();
}

SurvivalCurve survival_probability(const std::vector<PhaseState>& ensemble, const MapParams& params,
                                   double r_c, std::uint64_t n_max, const SurvivalOptions& options) {
    if (ensemble.empty()) {
        throw std::invalid_argument("survival_probability: empty ensemble");
    }
    if (!(r_c > 0.0)) {
        throw std::invalid_argument("survival_probability: r_c must be > 0");
    }
    if (n_max < 1) {
        throw std::invalid_argument("survival_probability: n_max must be >= 1");
    }
    const double rc2 = r_c * r_c;
    for (const auto& s : ensemble) {
        if (!(s.x * s.x + s.p * s.p < rc2)) {
            throw std::invalid_argument("survival_probability: ensemble member starts outside r_c");
        }
    }

    const auto chunks = detail::split(ensemble.size(), options.threads);
    std::vector<std::vector<std::uint64_t>> exits(chunks.size());

    detail::run_chunks(chunks, [&](const detail::Chunk& c) {
        std::vector<double> x;
        std::vector<double> p;
        x.reserve(c.end - c.begin);
        p.reserve(c.end - c.begin);
        for (std::size_t i = c.begin; i < c.end; ++i) {
            x.push_back(ensemble[i].x);
            p.push_back(ensemble[i].p);
        }
        auto& exited = exits[c.index];
        exited.assign(static_cast<std::size_t>(n_max) + 1, 0);
        for (std::uint64_t n = 1; n <= n_max && !x.empty(); ++n) {
            kernels::step_batch(x, p, params, options.isa);
            // Swap-remove exited members; survivors are order-insensitive.
            std::size_t i = 0;
            while (i < x.size()) {
                const double r2 = x[i] * x[i] + p[i] * p[i];
                if (r2 >= rc2 || std::isnan(r2)) {
                    ++exited[n];
                    x[i] = x.back();
                    p[i] = p.back();
                    x.pop_back();
                    p.pop_back();
                } else {
                    ++i;
                }
            }
        }
    });

    SurvivalCurve curve;
    curve.r_c = r_c;
    curve.n_total = ensemble.size();
    curve.p_s.resize(static_cast<std::size_t>(n_max) + 1);
    std::uint64_t exited_total = 0;
    const double total = static_cast<double>(ensemble.size());
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (const auto& e : exits) exited_total += e[n];
        curve.p_s[n] = 1.0 - static_cast<double>(exited_total) / total;
    }
    return curve;
}

}  // namespace webmap
