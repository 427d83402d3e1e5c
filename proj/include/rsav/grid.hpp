#ifndef RSAV_GRID_HPP
#define RSAV_GRID_HPP

#include <cmath>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <fftw3.h>

#include "rsav/errors.hpp"

namespace rsav {

namespace detail {

// FFTW planner calls are not thread safe; executions on distinct plans are.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/** Owns the complex work buffer and the forward/backward c2c plans for one
 *  grid size.  A mutex serializes use of the shared buffer, so one engine can
 *  be used from several threads; independent Grids never contend. */
class FftEngine {
  public:
    FftEngine(int nx, int ny) : nx_(nx), ny_(ny) {
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
        if (!buf_) throw GridError("fftw buffer allocation failed");
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_2d(nx, ny, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(nx, ny, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw GridError("fftw plan creation failed");
    }
    ~FftEngine() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    // out[j] = (1/(nx*ny)) * sum_x in[x] e^{-i k_j . x}
    void forward(const double* re, std::complex<double>* out) {
        std::lock_guard<std::mutex> lock(mtx_);
        const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
        for (std::size_t i = 0; i < n; ++i) {
            buf_[i][0] = re[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::complex<double>(buf_[i][0] * scale, buf_[i][1] * scale);
    }

    // out[x] = sum_j in[j] e^{+i k_j . x}; real part only
    void backward(const std::complex<double>* in, double* out) {
        std::lock_guard<std::mutex> lock(mtx_);
        const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
        for (std::size_t i = 0; i < n; ++i) {
            buf_[i][0] = in[i].real();
            buf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        for (std::size_t i = 0; i < n; ++i) out[i] = buf_[i][0];
    }

  private:
    int nx_, ny_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    std::mutex mtx_;
};

} // namespace detail

/** Uniform periodic grid on [0,Lx) x [0,Ly) with Nx x Ny nodes.
 *
 *  Value-semantic handle to immutable shared data (wavenumber tables plus the
 *  FFT engine for this size).  Node (ix,iy) sits at (ix*hx, iy*hy) with
 *  hx = Lx/Nx, hy = Ly/Ny.  Wavenumbers follow FFT ordering:
 *  kx[j] = 2*pi/Lx * j for j <= Nx/2 and 2*pi/Lx * (j-Nx) above. */
class Grid {
  public:
    Grid() = default;

    int nx() const { return d_->nx; }
    int ny() const { return d_->ny; }
    double lx() const { return d_->lx; }
    double ly() const { return d_->ly; }
    double hx() const { return d_->hx; }
    double hy() const { return d_->hy; }
    double area() const { return d_->lx * d_->ly; }
    std::size_t size() const { return static_cast<std::size_t>(d_->nx) * d_->ny; }

    // row-major over (x index, y index)
    std::size_t idx(int ix, int iy) const { return static_cast<std::size_t>(ix) * d_->ny + iy; }
    double x(int ix) const { return ix * d_->hx; }
    double y(int iy) const { return iy * d_->hy; }
    double kx(int jx) const { return d_->kx[jx]; }
    double ky(int jy) const { return d_->ky[jy]; }
    const std::vector<double>& kx_table() const { return d_->kx; }
    const std::vector<double>& ky_table() const { return d_->ky; }

    bool valid() const { return static_cast<bool>(d_); }
    bool compatible(const Grid& o) const {
        return d_ == o.d_ || (d_ && o.d_ && d_->nx == o.d_->nx && d_->ny == o.d_->ny &&
                              d_->lx == o.d_->lx && d_->ly == o.d_->ly);
    }

    detail::FftEngine& engine() const { return *d_->engine; }

    friend Grid make_grid(int nx, int ny, double lx, double ly);

  private:
    struct Data {
        int nx, ny;
        double lx, ly, hx, hy;
        std::vector<double> kx, ky;
        std::unique_ptr<detail::FftEngine> engine;
    };
    std::shared_ptr<const Data> d_;
};

inline Grid make_grid(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
        throw GridError("grid extents must be even and >= 4, got " + std::to_string(nx) + " x " +
                        std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0)) throw GridError("domain lengths must be positive");

    auto d = std::make_shared<Grid::Data>();
    d->nx = nx;
    d->ny = ny;
    d->lx = lx;
    d->ly = ly;
    d->hx = lx / nx;
    d->hy = ly / ny;
    d->kx.resize(nx);
    d->ky.resize(ny);
    const double fx = 2.0 * M_PI / lx, fy = 2.0 * M_PI / ly;
    for (int j = 0; j < nx; ++j) d->kx[j] = fx * (j <= nx / 2 ? j : j - nx);
    for (int j = 0; j < ny; ++j) d->ky[j] = fy * (j <= ny / 2 ? j : j - ny);
    d->engine = std::make_unique<detail::FftEngine>(nx, ny);

    Grid g;
    g.d_ = std::move(d);
    return g;
}

} // namespace rsav

#endif
