#ifndef RSAV_FIELD_HPP
#define RSAV_FIELD_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "rsav/errors.hpp"
#include "rsav/grid.hpp"

namespace rsav {

// real nodal values, row-major over (x index, y index)
struct Field {
    Grid grid;
    std::vector<double> v;
};

// complex Fourier coefficients, same layout as Field, FFT mode ordering
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> c;
};

// real diagonal Fourier multiplier
struct Symbol {
    Grid grid;
    std::vector<double> m;
};

inline Field make_field(const Grid& g, double fill = 0.0) {
    return Field{g, std::vector<double>(g.size(), fill)};
}

inline SpectralField make_spectral(const Grid& g) {
    return SpectralField{g, std::vector<std::complex<double>>(g.size())};
}

inline Symbol make_symbol(const Grid& g, double fill = 0.0) {
    return Symbol{g, std::vector<double>(g.size(), fill)};
}

template <class A, class B>
inline void require_same_grid(const A& a, const B& b, const char* what) {
    if (!a.grid.compatible(b.grid)) throw ShapeError(std::string("grid mismatch in ") + what);
}

inline bool all_finite(const Field& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

namespace detail {

// pairwise summation: deterministic and ~eps*log2(n) accurate, which keeps
// 1e-12 tolerances safe on 512^2 grids where naive accumulation drifts
inline double pairwise_sum(const double* p, std::size_t n) {
    if (n <= 64) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

} // namespace detail

// in place: dst += a*src
inline void add_scaled(Field& dst, double a, const Field& src) {
    require_same_grid(dst, src, "add_scaled");
    for (std::size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += a * src.v[i];
}

inline Field linear_combination(double a, const Field& fa, double b, const Field& fb) {
    require_same_grid(fa, fb, "linear_combination");
    Field out = make_field(fa.grid);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a * fa.v[i] + b * fb.v[i];
    return out;
}

} // namespace rsav

#endif
