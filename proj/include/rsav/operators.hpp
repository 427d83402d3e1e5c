#ifndef RSAV_OPERATORS_HPP
#define RSAV_OPERATORS_HPP

#include <cmath>
#include <complex>
#include <utility>

#include "rsav/field.hpp"
#include "rsav/grid.hpp"

namespace rsav {

/** Forward transform; divides by Nx*Ny so coeff(0,0) equals the field mean. */
inline SpectralField transform(const Field& f) {
    SpectralField out = make_spectral(f.grid);
    f.grid.engine().forward(f.v.data(), out.c.data());
    return out;
}

/** Inverse transform; keeps the real part (input assumed conjugate symmetric). */
inline Field inverse(const SpectralField& s) {
    Field out = make_field(s.grid);
    s.grid.engine().backward(s.c.data(), out.v.data());
    return out;
}

inline SpectralField apply_symbol(const Symbol& sym, const SpectralField& s) {
    require_same_grid(sym, s, "apply_symbol");
    SpectralField out = make_spectral(s.grid);
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = sym.m[i] * s.c[i];
    return out;
}

// transform, multiply, inverse in one call
inline Field apply_operator(const Symbol& sym, const Field& f) {
    require_same_grid(sym, f, "apply_operator");
    return inverse(apply_symbol(sym, transform(f)));
}

/** hx*hy * sum of nodal values (rectangle rule; spectrally exact on this grid). */
inline double integrate(const Field& f) {
    return f.grid.hx() * f.grid.hy() * detail::pairwise_sum(f.v.data(), f.v.size());
}

inline double inner_product(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner_product");
    std::vector<double> prod(a.v.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a.v[i] * b.v[i];
    return a.grid.hx() * a.grid.hy() * detail::pairwise_sum(prod.data(), prod.size());
}

inline double l2_norm(const Field& f) { return std::sqrt(inner_product(f, f)); }

inline double mean(const Field& f) { return integrate(f) / f.grid.area(); }

namespace detail {

// d/dx and d/dy as i*k multipliers; the unpaired Nyquist mode carries no sign
// information for odd derivatives, so it is dropped there
inline void spectral_derivatives(const SpectralField& s, SpectralField& dx, SpectralField& dy) {
    const Grid& g = s.grid;
    const int nx = g.nx(), ny = g.ny();
    for (int jx = 0; jx < nx; ++jx) {
        const double kx = (jx == nx / 2) ? 0.0 : g.kx(jx);
        for (int jy = 0; jy < ny; ++jy) {
            const double ky = (jy == ny / 2) ? 0.0 : g.ky(jy);
            const std::size_t i = g.idx(jx, jy);
            const std::complex<double> c = s.c[i];
            dx.c[i] = std::complex<double>(-kx * c.imag(), kx * c.real());
            dy.c[i] = std::complex<double>(-ky * c.imag(), ky * c.real());
        }
    }
}

} // namespace detail

struct Gradient {
    Field x, y;
};

inline Gradient gradient(const Field& f) {
    SpectralField s = transform(f);
    SpectralField dx = make_spectral(f.grid), dy = make_spectral(f.grid);
    detail::spectral_derivatives(s, dx, dy);
    return Gradient{inverse(dx), inverse(dy)};
}

inline Field divergence(const Field& wx, const Field& wy) {
    require_same_grid(wx, wy, "divergence");
    SpectralField sx = transform(wx), sy = transform(wy);
    SpectralField dxx = make_spectral(wx.grid), dxy = make_spectral(wx.grid);
    SpectralField dyx = make_spectral(wx.grid), dyy = make_spectral(wx.grid);
    detail::spectral_derivatives(sx, dxx, dxy);
    detail::spectral_derivatives(sy, dyx, dyy);
    for (std::size_t i = 0; i < dxx.c.size(); ++i) dxx.c[i] += dyy.c[i];
    return inverse(dxx);
}

inline Symbol identity_symbol(const Grid& g) { return make_symbol(g, 1.0); }

// -|k|^2 (Nyquist kept: even-order derivative)
inline Symbol laplacian_symbol(const Grid& g) {
    Symbol s = make_symbol(g);
    for (int jx = 0; jx < g.nx(); ++jx)
        for (int jy = 0; jy < g.ny(); ++jy)
            s.m[g.idx(jx, jy)] = -(g.kx(jx) * g.kx(jx) + g.ky(jy) * g.ky(jy));
    return s;
}

// |k|^4
inline Symbol biharmonic_symbol(const Grid& g) {
    Symbol s = laplacian_symbol(g);
    for (double& m : s.m) m = m * m;
    return s;
}

/** Zeroes modes beyond the 2/3 cutoff in either direction (optional dealiasing). */
inline void dealias_23(SpectralField& s) {
    const Grid& g = s.grid;
    const int nx = g.nx(), ny = g.ny();
    for (int jx = 0; jx < nx; ++jx) {
        const int sx = jx <= nx / 2 ? jx : jx - nx;
        for (int jy = 0; jy < ny; ++jy) {
            const int sy = jy <= ny / 2 ? jy : jy - ny;
            if (3 * std::abs(sx) > nx || 3 * std::abs(sy) > ny) s.c[g.idx(jx, jy)] = 0.0;
        }
    }
}

} // namespace rsav

#endif
