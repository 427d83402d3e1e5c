#ifndef RSAV_INTEGRATOR_HPP
#define RSAV_INTEGRATOR_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rsav/errors.hpp"
#include "rsav/field.hpp"
#include "rsav/model.hpp"
#include "rsav/operators.hpp"

// Semi-implicit auxiliary-variable time steppers.  Both schemes treat the full
// linear part Lambda = L + sum_i gamma_i R implicitly (diagonal resolvent in
// Fourier space) and the nonlinear factor V_i/Q_i explicitly at the
// extrapolated state, then close the (phi, q_1..q_k) coupling with a k x k
// solve via superposition.
//
// Crank-Nicolson:
//   (phi^{n+1}-phi^n)/dt = -G mu,   mu = Lambda phi^{n+1/2}
//                                        + sum_i (qt_i^{n+1}+q_i^n)/2 * V_i/Q_i
//   qt_i^{n+1} = q_i^n + (V_i/(2Q_i), phi^{n+1}-phi^n)
// BDF2:
//   (3phi^{n+1}-4phi^n+phi^{n-1})/(2dt) = -G mu,
//   mu = Lambda phi^{n+1} + sum_i qt_i^{n+1} V_i/Q_i
//   3qt_i^{n+1}-4q_i^n+q_i^{n-1} = (V_i/(2Q_i), 3phi^{n+1}-4phi^n+phi^{n-1})
// with V_i, Q_i evaluated at phibar = 3/2 phi^n - 1/2 phi^{n-1}.

namespace rsav {

enum class TimeScheme { CrankNicolson, Bdf2 };

enum class SchemeTag { SavCn, SavBdf2, RsavCn, RsavBdf2 };

inline TimeScheme time_scheme_of(SchemeTag tag) {
    return (tag == SchemeTag::SavCn || tag == SchemeTag::RsavCn) ? TimeScheme::CrankNicolson
                                                                 : TimeScheme::Bdf2;
}

inline bool is_relaxed(SchemeTag tag) {
    return tag == SchemeTag::RsavCn || tag == SchemeTag::RsavBdf2;
}

inline const char* scheme_name(SchemeTag tag) {
    switch (tag) {
        case SchemeTag::SavCn: return "sav-cn";
        case SchemeTag::SavBdf2: return "sav-bdf2";
        case SchemeTag::RsavCn: return "rsav-cn";
        case SchemeTag::RsavBdf2: return "rsav-bdf2";
    }
    return "?";
}

inline SchemeTag scheme_from_name(const std::string& name) {
    for (SchemeTag tag :
         {SchemeTag::SavCn, SchemeTag::SavBdf2, SchemeTag::RsavCn, SchemeTag::RsavBdf2})
        if (name == scheme_name(tag)) return tag;
    throw ConfigError("unknown scheme '" + name + "'");
}

struct SavState {
    Field phi_n, phi_nm1;
    std::vector<double> q_n, q_nm1;
    double t = 0.0;
    long step = 0;
};

/** Start state: both history levels hold phi0 and q_i = Q_i(phi0). */
inline SavState init_state(const ModelSpec& m, const Field& phi0) {
    std::vector<double> q(m.k);
    for (int i = 0; i < m.k; ++i) q[i] = Q_of(m, i, phi0);
    return SavState{phi0, phi0, q, q, 0.0, 0};
}

/** phibar = 3/2 a - 1/2 b: second-order extrapolation half a step past a. */
inline Field extrapolate(const Field& a, const Field& b) {
    return linear_combination(1.5, a, -0.5, b);
}

struct StepResult {
    Field phi_np1;
    std::vector<double> q_tilde;
    Field mu;    // chemical potential the step dissipates against
    double diss; // (G mu, mu)
};

struct StepOptions {
    bool dealias = false; // 2/3-rule truncation of the nonlinear terms
};

namespace detail {

// M x = r by Gaussian elimination with partial pivoting (k is 1 or 2 here)
inline std::vector<double> solve_dense(std::vector<std::vector<double>> M, std::vector<double> r) {
    const int k = static_cast<int>(r.size());
    double scale = 0.0;
    for (auto& row : M)
        for (double v : row) scale = std::max(scale, std::abs(v));
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int row = col + 1; row < k; ++row)
            if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
        if (std::abs(M[piv][col]) <= 1e-14 * std::max(scale, 1.0))
            throw SolverError("auxiliary coupling matrix is singular");
        std::swap(M[piv], M[col]);
        std::swap(r[piv], r[col]);
        for (int row = col + 1; row < k; ++row) {
            const double f = M[row][col] / M[col][col];
            for (int j = col; j < k; ++j) M[row][j] -= f * M[col][j];
            r[row] -= f * r[col];
        }
    }
    std::vector<double> x(k);
    for (int row = k - 1; row >= 0; --row) {
        double s = r[row];
        for (int j = row + 1; j < k; ++j) s -= M[row][j] * x[j];
        x[row] = s / M[row][row];
    }
    return x;
}

inline std::pair<Field, std::vector<double>> superposition_solve_spectral(
    const Symbol& A, const SpectralField& rhs0, const std::vector<SpectralField>& rhs,
    const std::vector<Field>& pairing, const std::vector<double>& affine) {
    const int k = static_cast<int>(rhs.size());
    if (static_cast<int>(pairing.size()) != k || static_cast<int>(affine.size()) != k)
        throw ShapeError("superposition_solve: mismatched variable counts");
    for (double v : A.m)
        if (!(v > 0.0)) throw SolverError("resolvent multiplier not positive");

    auto resolve = [&A](const SpectralField& s) {
        SpectralField out = make_spectral(s.grid);
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = s.c[i] / A.m[i];
        return inverse(out);
    };

    Field phi0 = resolve(rhs0);
    std::vector<Field> phik;
    phik.reserve(k);
    for (int i = 0; i < k; ++i) {
        require_same_grid(A, rhs[i], "superposition_solve");
        phik.push_back(resolve(rhs[i]));
    }

    std::vector<std::vector<double>> M(k, std::vector<double>(k));
    std::vector<double> r(k);
    for (int i = 0; i < k; ++i) {
        require_same_grid(pairing[i], phi0, "superposition_solve");
        for (int j = 0; j < k; ++j)
            M[i][j] = (i == j ? 1.0 : 0.0) - inner_product(pairing[i], phik[j]);
        r[i] = affine[i] + inner_product(pairing[i], phi0);
    }
    std::vector<double> qt = solve_dense(std::move(M), std::move(r));

    for (int i = 0; i < k; ++i) add_scaled(phi0, qt[i], phik[i]);
    return {std::move(phi0), std::move(qt)};
}

// Lambda = lin + (sum_i gamma_i) reg
inline Symbol effective_symbol(const ModelSpec& m, const ModelSymbols& sym) {
    double gsum = 0.0;
    for (double gv : m.gamma) gsum += gv;
    Symbol eff = sym.lin;
    for (std::size_t i = 0; i < eff.m.size(); ++i) eff.m[i] += gsum * sym.reg.m[i];
    return eff;
}

struct NonlinearData {
    std::vector<double> Qbar;      // Q_i(phibar)
    std::vector<Field> T;          // V_i(phibar)
    std::vector<SpectralField> Th; // transforms of T
    std::vector<Field> b;          // V_i/(2 Q_i)
};

inline NonlinearData nonlinear_data(const ModelSpec& m, const Field& phibar,
                                    const StepOptions& opt) {
    NonlinearData nd;
    nd.Qbar.resize(m.k);
    for (int i = 0; i < m.k; ++i) {
        nd.Qbar[i] = Q_of(m, i, phibar);
        Field Ti = nonlinear_term(m, i, phibar);
        if (opt.dealias) {
            SpectralField th = transform(Ti);
            dealias_23(th);
            Ti = inverse(th);
            nd.Th.push_back(std::move(th));
        } else {
            nd.Th.push_back(transform(Ti));
        }
        Field bi = Ti;
        const double inv2q = 1.0 / (2.0 * nd.Qbar[i]);
        for (double& v : bi.v) v *= inv2q;
        nd.T.push_back(std::move(Ti));
        nd.b.push_back(std::move(bi));
    }
    return nd;
}

inline void check_finite(const Field& phi, const std::vector<double>& qt, double diss) {
    bool ok = all_finite(phi) && std::isfinite(diss);
    for (double v : qt) ok = ok && std::isfinite(v);
    if (!ok) throw DivergenceError("non-finite value in time step");
}

} // namespace detail

/** Solves phi = A^{-1}(rhs0 + sum_i qt_i rhs_i) coupled with the affine
 *  relations qt_i = affine_i + (pairing_i, phi); A acts as a pointwise
 *  division in Fourier space. */
inline std::pair<Field, std::vector<double>> superposition_solve(
    const Symbol& A, const Field& rhs0, const std::vector<Field>& rhs,
    const std::vector<Field>& pairing, const std::vector<double>& affine) {
    std::vector<SpectralField> rh;
    rh.reserve(rhs.size());
    for (const Field& f : rhs) rh.push_back(transform(f));
    return detail::superposition_solve_spectral(A, transform(rhs0), rh, pairing, affine);
}

inline std::pair<Field, double> superposition_solve(const Symbol& A, const Field& rhs0,
                                                    const Field& rhs1, const Field& pairing,
                                                    double affine) {
    auto [phi, qt] = superposition_solve(A, rhs0, std::vector<Field>{rhs1},
                                         std::vector<Field>{pairing},
                                         std::vector<double>{affine});
    return {std::move(phi), qt[0]};
}

inline StepResult sav_cn_step(const SavState& s, const ModelSpec& m, const ModelSymbols& sym,
                              double dt, const StepOptions& opt = {}) {
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    const Grid& g = s.phi_n.grid;
    Field phibar = extrapolate(s.phi_n, s.phi_nm1);
    detail::NonlinearData nd = detail::nonlinear_data(m, phibar, opt);
    Symbol eff = detail::effective_symbol(m, sym);

    Symbol A = make_symbol(g);
    for (std::size_t i = 0; i < A.m.size(); ++i)
        A.m[i] = 1.0 + 0.5 * dt * sym.mob.m[i] * eff.m[i];

    SpectralField phin_h = transform(s.phi_n);
    SpectralField rhs0 = make_spectral(g);
    for (std::size_t i = 0; i < rhs0.c.size(); ++i)
        rhs0.c[i] = (1.0 - 0.5 * dt * sym.mob.m[i] * eff.m[i]) * phin_h.c[i];
    std::vector<SpectralField> rhs;
    std::vector<double> affine(m.k);
    for (int i = 0; i < m.k; ++i) {
        SpectralField ri = make_spectral(g);
        const double scale = -0.5 * dt / nd.Qbar[i];
        for (std::size_t n = 0; n < ri.c.size(); ++n) {
            ri.c[n] = scale * sym.mob.m[n] * nd.Th[i].c[n];
            rhs0.c[n] += s.q_n[i] * ri.c[n];
        }
        rhs.push_back(std::move(ri));
        affine[i] = s.q_n[i] - inner_product(nd.b[i], s.phi_n);
    }

    auto [phi_np1, q_tilde] =
        detail::superposition_solve_spectral(A, rhs0, rhs, nd.b, affine);

    Field half = linear_combination(0.5, phi_np1, 0.5, s.phi_n);
    Field mu = apply_operator(eff, half);
    for (int i = 0; i < m.k; ++i)
        add_scaled(mu, 0.5 * (q_tilde[i] + s.q_n[i]) / nd.Qbar[i], nd.T[i]);
    const double diss = inner_product(apply_operator(sym.mob, mu), mu);

    detail::check_finite(phi_np1, q_tilde, diss);
    return StepResult{std::move(phi_np1), std::move(q_tilde), std::move(mu), diss};
}

inline StepResult sav_bdf2_step(const SavState& s, const ModelSpec& m, const ModelSymbols& sym,
                                double dt, const StepOptions& opt = {}) {
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    const Grid& g = s.phi_n.grid;
    Field phibar = extrapolate(s.phi_n, s.phi_nm1);
    detail::NonlinearData nd = detail::nonlinear_data(m, phibar, opt);
    Symbol eff = detail::effective_symbol(m, sym);

    Symbol A = make_symbol(g);
    const double c0 = 1.5 / dt;
    for (std::size_t i = 0; i < A.m.size(); ++i) A.m[i] = c0 + sym.mob.m[i] * eff.m[i];

    Field hist = linear_combination(4.0 / 3.0, s.phi_n, -1.0 / 3.0, s.phi_nm1);
    SpectralField hist_h = transform(hist);
    SpectralField rhs0 = make_spectral(g);
    for (std::size_t i = 0; i < rhs0.c.size(); ++i) rhs0.c[i] = c0 * hist_h.c[i];

    std::vector<SpectralField> rhs;
    std::vector<double> affine(m.k);
    for (int i = 0; i < m.k; ++i) {
        SpectralField ri = make_spectral(g);
        const double scale = -1.0 / nd.Qbar[i];
        for (std::size_t n = 0; n < ri.c.size(); ++n) ri.c[n] = scale * sym.mob.m[n] * nd.Th[i].c[n];
        rhs.push_back(std::move(ri));
        affine[i] = (4.0 * s.q_n[i] - s.q_nm1[i]) / 3.0 - inner_product(nd.b[i], hist);
    }

    auto [phi_np1, q_tilde] =
        detail::superposition_solve_spectral(A, rhs0, rhs, nd.b, affine);

    Field mu = apply_operator(eff, phi_np1);
    for (int i = 0; i < m.k; ++i) add_scaled(mu, q_tilde[i] / nd.Qbar[i], nd.T[i]);
    const double diss = inner_product(apply_operator(sym.mob, mu), mu);

    detail::check_finite(phi_np1, q_tilde, diss);
    return StepResult{std::move(phi_np1), std::move(q_tilde), std::move(mu), diss};
}

/** BDF2 runs need (phi^1, q^1) before the two-level formula applies; the first
 *  step is one CN step from the duplicated start state. */
inline StepResult bootstrap_first_step(const SavState& s, const ModelSpec& m,
                                       const ModelSymbols& sym, double dt,
                                       const StepOptions& opt = {}) {
    return sav_cn_step(s, m, sym, dt, opt);
}

/** Rotates the history window after the relaxation step fixed q^{n+1}. */
inline void advance_state(SavState& s, StepResult&& res, std::vector<double> q_new, double dt) {
    s.phi_nm1 = std::move(s.phi_n);
    s.phi_n = std::move(res.phi_np1);
    s.q_nm1 = std::move(s.q_n);
    s.q_n = std::move(q_new);
    s.t += dt;
    s.step += 1;
}

} // namespace rsav

#endif
