#ifndef RSAV_RELAXATION_HPP
#define RSAV_RELAXATION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsav/errors.hpp"
#include "rsav/integrator.hpp"
#include "rsav/model.hpp"

// Relaxation step: replace the integrated auxiliary value qt^{n+1} by the
// blend q^{n+1} = xi0 qt^{n+1} + (1-xi0) Q(phi^{n+1}), choosing the smallest
// xi0 in [0,1] for which the energy drop released by the blend stays within
// the budget B = dt * eta * (G mu, mu).  Feasibility of xi0 = 1 (the plain
// scheme) makes the constraint set nonempty, so the minimizer is the smaller
// root of the quadratic when one exists below 1.
//
// Crank-Nicolson constraint (summed over auxiliary variables):
//   sum_i (q_i^{n+1})^2 - (qt_i^{n+1})^2 <= B
// BDF2 constraint (matches the two-level Lyapunov form):
//   sum_i [ (q_i^{n+1})^2 + (2q_i^{n+1}-q_i^n)^2 - (qt_i^{n+1})^2
//           - (2qt_i^{n+1}-q_i^n)^2 ] <= B

namespace rsav {

struct RelaxationConfig {
    double eta = 0.95; // fraction of the dissipation budget the blend may spend
};

inline double relax_budget(double diss, double dt, const RelaxationConfig& rc) {
    if (!(rc.eta >= 0.0 && rc.eta <= 1.0)) throw SolverError("eta must lie in [0,1]");
    return dt * rc.eta * std::max(diss, 0.0);
}

/** Smallest xi in [0,1] with a xi^2 + b xi + c <= 0, given that xi = 1 is
 *  feasible (a+b+c <= 0) and a >= 0.  Degenerate a means the constraint is
 *  linear and xi = 0 already feasible whenever c <= 0. */
inline double solve_xi(double a, double b, double c) {
    if (a <= 1e-30) return (c <= 0.0) ? 0.0 : std::clamp(-c / b, 0.0, 1.0);
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) disc = 0.0; // round-off; analytically disc >= (b + 2a)^2
    const double root = (-b - std::sqrt(disc)) / (2.0 * a);
    return std::clamp(root, 0.0, 1.0);
}

struct RelaxOutcome {
    double xi0 = 1.0;
    std::vector<double> q_new;
    double constraint_residual = 0.0; // quadratic value at xi0; <= 0 up to round-off
};

inline RelaxOutcome optimal_xi_cn(const std::vector<double>& q_tilde,
                                  const std::vector<double>& Qv, double B) {
    double a = 0.0, b = 0.0, c = -B;
    for (std::size_t i = 0; i < q_tilde.size(); ++i) {
        const double d = q_tilde[i] - Qv[i];
        a += d * d;
        b += 2.0 * d * Qv[i];
        c += Qv[i] * Qv[i] - q_tilde[i] * q_tilde[i];
    }
    RelaxOutcome out;
    out.xi0 = solve_xi(a, b, c);
    out.q_new.resize(q_tilde.size());
    for (std::size_t i = 0; i < q_tilde.size(); ++i)
        out.q_new[i] = out.xi0 * q_tilde[i] + (1.0 - out.xi0) * Qv[i];
    out.constraint_residual = (a * out.xi0 + b) * out.xi0 + c;
    return out;
}

inline RelaxOutcome optimal_xi_bdf2(const std::vector<double>& q_tilde,
                                    const std::vector<double>& Qv,
                                    const std::vector<double>& q_n, double B) {
    double a = 0.0, b = 0.0, c = -B;
    for (std::size_t i = 0; i < q_tilde.size(); ++i) {
        const double d = q_tilde[i] - Qv[i];
        a += 5.0 * d * d;
        b += 2.0 * d * (5.0 * Qv[i] - 2.0 * q_n[i]);
        const double two_q = 2.0 * Qv[i] - q_n[i];
        const double two_qt = 2.0 * q_tilde[i] - q_n[i];
        c += Qv[i] * Qv[i] + two_q * two_q - q_tilde[i] * q_tilde[i] - two_qt * two_qt;
    }
    RelaxOutcome out;
    out.xi0 = solve_xi(a, b, c);
    out.q_new.resize(q_tilde.size());
    for (std::size_t i = 0; i < q_tilde.size(); ++i)
        out.q_new[i] = out.xi0 * q_tilde[i] + (1.0 - out.xi0) * Qv[i];
    out.constraint_residual = (a * out.xi0 + b) * out.xi0 + c;
    return out;
}

/** Computes Q_i(phi^{n+1}) and the optimal blend.  With relaxation disabled
 *  the outcome keeps xi0 = 1 (q^{n+1} = qt^{n+1}) but still reports Q for
 *  diagnostics. */
inline RelaxOutcome relax_aux(const ModelSpec& m, const SavState& s, const StepResult& res,
                              TimeScheme form, double dt, const RelaxationConfig& rc,
                              bool enabled) {
    std::vector<double> Qv(m.k);
    for (int i = 0; i < m.k; ++i) Qv[i] = Q_of(m, i, res.phi_np1);
    if (!enabled) {
        RelaxOutcome out;
        out.xi0 = 1.0;
        out.q_new = res.q_tilde;
        out.constraint_residual = 0.0;
        return out;
    }
    const double B = relax_budget(res.diss, dt, rc);
    return form == TimeScheme::CrankNicolson ? optimal_xi_cn(res.q_tilde, Qv, B)
                                             : optimal_xi_bdf2(res.q_tilde, Qv, s.q_n, B);
}

} // namespace rsav

#endif
