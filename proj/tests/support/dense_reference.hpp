#pragma once

// Dense linear-algebra reference for the coupled (phi, q) solves.  Everything
// here is rebuilt from first principles: DFT matrices assembled entry by
// entry, nodal nonlinearities written out longhand, and the coupled system
// solved as one (N+1) x (N+1) matrix with Eigen.  No FFTs, no shared code
// with the production solve beyond the Grid geometry, so agreement checks the
// whole superposition path.  Only sensible for small grids (N = nx*ny).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "rsav/grid.hpp"
#include "rsav/model.hpp"

namespace testsupport {

// real matrix of the Fourier multiplier diag(sym) conjugated by the DFT pair
inline Eigen::MatrixXd multiplier_matrix(const rsav::Grid& g, const rsav::Symbol& sym) {
    const int nx = g.nx(), ny = g.ny();
    const int N = nx * ny;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    const std::complex<double> I(0.0, 1.0);
    for (int jx = 0; jx < nx; ++jx) {
        for (int jy = 0; jy < ny; ++jy) {
            const double m = sym.m[g.idx(jx, jy)];
            if (m == 0.0) continue;
            for (int px = 0; px < nx; ++px)
                for (int py = 0; py < ny; ++py) {
                    const std::complex<double> row =
                        std::exp(2.0 * M_PI * I *
                                 (double(jx * px) / nx + double(jy * py) / ny));
                    for (int qx = 0; qx < nx; ++qx)
                        for (int qy = 0; qy < ny; ++qy) {
                            const std::complex<double> col =
                                std::exp(-2.0 * M_PI * I *
                                         (double(jx * qx) / nx + double(jy * qy) / ny));
                            M(g.idx(px, py), g.idx(qx, qy)) += m * row * col / double(N);
                        }
                }
        }
    }
    return M.real();
}

struct DenseDoubleWell {
    double gamma = 0.0; // stabilization shift
    double C = 0.0;     // constant under the root
};

inline Eigen::VectorXd dense_nonlinear(const Eigen::VectorXd& phibar, const DenseDoubleWell& p) {
    Eigen::VectorXd T(phibar.size());
    for (Eigen::Index n = 0; n < phibar.size(); ++n)
        T[n] = phibar[n] * (phibar[n] * phibar[n] - 1.0 - p.gamma);
    return T;
}

inline double dense_Q(const rsav::Grid& g, const Eigen::VectorXd& phibar,
                      const DenseDoubleWell& p) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < phibar.size(); ++n) {
        const double t = phibar[n] * phibar[n] - 1.0 - p.gamma;
        acc += 0.25 * t * t;
    }
    return std::sqrt(acc * g.hx() * g.hy() + p.C);
}

struct DenseStep {
    Eigen::VectorXd phi;
    double q_tilde;
};

/** One Crank-Nicolson step for a double-well model, as a single dense solve
 *  over the stacked unknowns (phi^{n+1}, q~^{n+1}). */
inline DenseStep dense_cn_step(const rsav::Grid& g, const Eigen::MatrixXd& lam,
                               const Eigen::MatrixXd& mob, const DenseDoubleWell& p,
                               const Eigen::VectorXd& phi_n, const Eigen::VectorXd& phi_nm1,
                               double q_n, double dt) {
    const Eigen::Index N = phi_n.size();
    const Eigen::VectorXd phibar = 1.5 * phi_n - 0.5 * phi_nm1;
    const Eigen::VectorXd T = dense_nonlinear(phibar, p);
    const double Qbar = dense_Q(g, phibar, p);
    const double quad = g.hx() * g.hy();

    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd rhs(N + 1);
    const Eigen::MatrixXd GL = mob * lam;
    const Eigen::VectorXd GT = mob * T;

    A.topLeftCorner(N, N) = Eigen::MatrixXd::Identity(N, N) + 0.5 * dt * GL;
    A.topRightCorner(N, 1) = 0.5 * dt / Qbar * GT;
    A.bottomLeftCorner(1, N) = (-quad / (2.0 * Qbar)) * T.transpose();
    A(N, N) = 1.0;
    rhs.head(N) = phi_n - 0.5 * dt * GL * phi_n - 0.5 * dt * (q_n / Qbar) * GT;
    rhs[N] = q_n - (quad / (2.0 * Qbar)) * T.dot(phi_n);

    const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    return DenseStep{sol.head(N), sol[N]};
}

/** One BDF2 step with extrapolated nonlinearity, same stacked dense solve. */
inline DenseStep dense_bdf2_step(const rsav::Grid& g, const Eigen::MatrixXd& lam,
                                 const Eigen::MatrixXd& mob, const DenseDoubleWell& p,
                                 const Eigen::VectorXd& phi_n, const Eigen::VectorXd& phi_nm1,
                                 double q_n, double q_nm1, double dt) {
    const Eigen::Index N = phi_n.size();
    const Eigen::VectorXd phibar = 1.5 * phi_n - 0.5 * phi_nm1;
    const Eigen::VectorXd T = dense_nonlinear(phibar, p);
    const double Qbar = dense_Q(g, phibar, p);
    const double quad = g.hx() * g.hy();
    const Eigen::VectorXd hist = (4.0 * phi_n - phi_nm1) / 3.0;

    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd rhs(N + 1);
    A.topLeftCorner(N, N) = (1.5 / dt) * Eigen::MatrixXd::Identity(N, N) + mob * lam;
    A.topRightCorner(N, 1) = (1.0 / Qbar) * (mob * T);
    A.bottomLeftCorner(1, N) = (-quad / (2.0 * Qbar)) * T.transpose();
    A(N, N) = 1.0;
    rhs.head(N) = (1.5 / dt) * hist;
    rhs[N] = (4.0 * q_n - q_nm1) / 3.0 - (quad / (2.0 * Qbar)) * T.dot(hist);

    const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    return DenseStep{sol.head(N), sol[N]};
}

inline Eigen::VectorXd to_eigen(const rsav::Field& f) {
    Eigen::VectorXd v(f.v.size());
    for (std::size_t i = 0; i < f.v.size(); ++i) v[i] = f.v[i];
    return v;
}

} // namespace testsupport
