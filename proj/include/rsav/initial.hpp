#ifndef RSAV_INITIAL_HPP
#define RSAV_INITIAL_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "rsav/config.hpp"
#include "rsav/errors.hpp"
#include "rsav/field.hpp"
#include "rsav/operators.hpp"

namespace rsav {

namespace detail {

// SplitMix64: tiny, seedable, and identical on every platform, which keeps
// random initial data reproducible across toolchains
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// uniform in [0, 1) from the top 53 bits
inline double splitmix64_u01(std::uint64_t& state) {
    return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

} // namespace detail

/** phi0_hat + amp * cos(2 pi x / Lx) cos(2 pi y / Ly). */
inline Field cosine_initial(const Grid& g, double amp, double mean) {
    Field f = make_field(g);
    for (int ix = 0; ix < g.nx(); ++ix) {
        const double cx = std::cos(2.0 * M_PI * g.x(ix) / g.lx());
        for (int iy = 0; iy < g.ny(); ++iy)
            f.v[g.idx(ix, iy)] = mean + amp * cx * std::cos(2.0 * M_PI * g.y(iy) / g.ly());
    }
    return f;
}

/** Six-pointed star interface centred in the box, profile width set by eps:
 *  tanh((1.5 + 1.2 cos(6 theta) - 2 pi r) / (sqrt(2) eps)). */
inline Field star_initial(const Grid& g, double eps) {
    if (!(eps > 0.0)) throw ConfigError("star initial data needs a positive interface width");
    Field f = make_field(g);
    const double cx = 0.5 * g.lx(), cy = 0.5 * g.ly();
    const double w = std::sqrt(2.0) * eps;
    for (int ix = 0; ix < g.nx(); ++ix) {
        for (int iy = 0; iy < g.ny(); ++iy) {
            const double dx = g.x(ix) - cx, dy = g.y(iy) - cy;
            const double r = std::hypot(dx, dy);
            const double theta = std::atan2(dy, dx);
            f.v[g.idx(ix, iy)] =
                std::tanh((1.5 + 1.2 * std::cos(6.0 * theta) - 2.0 * M_PI * r) / w);
        }
    }
    return f;
}

/** Mean level plus zero-mean noise with peak amplitude amp, drawn from
 *  SplitMix64 in node order.  The same seed gives the same field on any
 *  machine. */
inline Field random_initial(const Grid& g, double amp, double mean, std::uint64_t seed) {
    Field f = make_field(g);
    std::uint64_t state = seed;
    for (double& v : f.v) v = 2.0 * detail::splitmix64_u01(state) - 1.0;
    const double m1 = rsav::mean(f);
    for (double& v : f.v) v -= m1;
    double peak = 0.0;
    for (double v : f.v) peak = std::max(peak, std::abs(v));
    const double scale = peak > 0.0 ? amp / peak : 0.0;
    for (double& v : f.v) v *= scale;
    const double m2 = rsav::mean(f); // second pass trims the rescaled residual
    for (double& v : f.v) v += mean - m2;
    return f;
}

inline Field make_initial(const Grid& g, const RunConfig& cfg) {
    if (cfg.ic == "cosine") return cosine_initial(g, cfg.ic_amp, initial_mean(cfg));
    if (cfg.ic == "star") return star_initial(g, cfg.model.epsilon);
    if (cfg.ic == "random") return random_initial(g, cfg.ic_amp, initial_mean(cfg), cfg.seed);
    throw ConfigError("ic must be cosine, star, or random");
}

} // namespace rsav

#endif
