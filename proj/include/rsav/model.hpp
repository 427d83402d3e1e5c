#ifndef RSAV_MODEL_HPP
#define RSAV_MODEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "rsav/errors.hpp"
#include "rsav/field.hpp"
#include "rsav/operators.hpp"

namespace rsav {

// Free energies take the form  E[phi] = 1/2 (phi, L phi) + int sum_i F_i(phi) dx
// with L nonnegative self-adjoint and G a nonnegative mobility operator, both
// diagonal in Fourier space.  Each auxiliary variable carries its own
// stabilization shift gamma_i and constant C_i.
enum class ModelKind {
    Heat,            // E = int D |grad phi|^2, G = I            (linear test model)
    AllenCahn,       // E = int eps^2/2 |grad phi|^2 + W(phi), G = lambda I
    CahnHilliard,    // same E, G = -lambda Lap                  (conserved)
    Mbe,             // E = int eps^2/2 (Lap phi)^2 + 1/4 (|grad phi|^2 - 1)^2, G = I
    Pfc,             // E = int 1/2 phi (a0 + Lap)^2 phi + 1/4 phi^4 - b0/2 phi^2, G = -lambda Lap
    Diblock,         // AC energy + sigma/2 long-range Green term, G = -lambda Lap
    SplitDoubleWell, // AC with W split into two weighted wells (two auxiliary variables)
};

// W(phi) = 1/4 (phi^2 - 1)^2

struct ModelSpec {
    ModelKind kind = ModelKind::AllenCahn;
    int k = 1; // number of auxiliary variables
    double epsilon = 0.0;
    double lambda = 0.0;
    double D = 0.0;
    double a0 = 0.0;
    double b0 = 0.0;
    double sigma = 0.0;
    double phi0_hat = 0.0;
    std::vector<double> gamma; // size k
    std::vector<double> C;     // size k
    std::vector<double> w;     // size k, SplitDoubleWell only
};

inline const char* model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Heat: return "heat";
        case ModelKind::AllenCahn: return "allen-cahn";
        case ModelKind::CahnHilliard: return "cahn-hilliard";
        case ModelKind::Mbe: return "mbe";
        case ModelKind::Pfc: return "pfc";
        case ModelKind::Diblock: return "diblock";
        case ModelKind::SplitDoubleWell: return "split-double-well";
    }
    return "?";
}

inline ModelKind model_from_name(const std::string& name) {
    for (ModelKind kind : {ModelKind::Heat, ModelKind::AllenCahn, ModelKind::CahnHilliard,
                           ModelKind::Mbe, ModelKind::Pfc, ModelKind::Diblock,
                           ModelKind::SplitDoubleWell})
        if (name == model_name(kind)) return kind;
    throw CatalogError("unknown model '" + name + "'");
}

inline ModelSpec default_model(ModelKind kind) {
    ModelSpec m;
    m.kind = kind;
    switch (kind) {
        case ModelKind::Heat:
            m.D = 1.0;
            m.gamma = {0.0}; // F = 0, so any nonzero shift would leave the catalog forms
            m.C = {1.0};
            break;
        case ModelKind::AllenCahn:
            m.epsilon = 0.01;
            m.lambda = 1.0;
            m.gamma = {1.0};
            m.C = {1.0};
            break;
        case ModelKind::CahnHilliard:
            m.epsilon = 0.01;
            m.lambda = 0.01;
            m.gamma = {4.0};
            m.C = {1.0};
            break;
        case ModelKind::Mbe:
            m.epsilon = 0.1;
            m.gamma = {4.0};
            m.C = {0.0};
            break;
        case ModelKind::Pfc:
            m.lambda = 1.0;
            m.a0 = 1.0;
            m.b0 = 0.325;
            m.gamma = {1.0};
            m.C = {1.0};
            break;
        case ModelKind::Diblock:
            m.epsilon = 0.01;
            m.lambda = 0.1;
            m.sigma = 1.0;
            m.phi0_hat = 0.4;
            m.gamma = {4.0};
            m.C = {1.0};
            break;
        case ModelKind::SplitDoubleWell:
            m.k = 2;
            m.epsilon = 0.01;
            m.lambda = 1.0;
            m.w = {0.5, 0.5};
            m.gamma = {0.5, 0.5};
            m.C = {0.5, 0.5};
            break;
    }
    return m;
}

inline void validate_model(const ModelSpec& m) {
    const std::string who = model_name(m.kind);
    if (m.k < 1) throw CatalogError(who + ": k must be >= 1");
    if (static_cast<int>(m.gamma.size()) != m.k || static_cast<int>(m.C.size()) != m.k)
        throw CatalogError(who + ": gamma/C must have one entry per auxiliary variable");
    for (double c : m.C)
        if (!(c >= 0.0)) throw CatalogError(who + ": C must be >= 0");
    for (double gv : m.gamma)
        if (!(gv >= 0.0)) throw CatalogError(who + ": gamma must be >= 0");
    switch (m.kind) {
        case ModelKind::Heat:
            if (!(m.D > 0.0)) throw CatalogError("heat: D must be positive");
            if (m.gamma[0] != 0.0) throw CatalogError("heat: gamma0 must be 0 (F = 0)");
            break;
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
            if (!(m.epsilon > 0.0) || !(m.lambda > 0.0))
                throw CatalogError(who + ": epsilon and lambda must be positive");
            break;
        case ModelKind::Mbe:
            if (!(m.epsilon > 0.0)) throw CatalogError("mbe: epsilon must be positive");
            break;
        case ModelKind::Pfc:
            if (!(m.lambda > 0.0)) throw CatalogError("pfc: lambda must be positive");
            break;
        case ModelKind::Diblock:
            if (!(m.epsilon > 0.0) || !(m.lambda > 0.0))
                throw CatalogError("diblock: epsilon and lambda must be positive");
            if (!(m.sigma >= 0.0)) throw CatalogError("diblock: sigma must be >= 0");
            break;
        case ModelKind::SplitDoubleWell: {
            if (m.k != 2) throw CatalogError("split-double-well: k must be 2");
            if (!(m.epsilon > 0.0) || !(m.lambda > 0.0))
                throw CatalogError(who + ": epsilon and lambda must be positive");
            if (static_cast<int>(m.w.size()) != m.k) throw CatalogError(who + ": w must have k entries");
            double sum = 0.0;
            for (double wv : m.w) {
                if (!(wv > 0.0)) throw CatalogError(who + ": weights must be positive");
                sum += wv;
            }
            if (std::abs(sum - 1.0) > 1e-12) throw CatalogError(who + ": weights must sum to 1");
            break;
        }
    }
}

struct ModelSymbols {
    Symbol lin; // L, from the quadratic energy part
    Symbol mob; // G
    Symbol reg; // operator the gamma_i shifts act through (identity; grad^T grad for MBE)
};

namespace detail {

// kx^2 + ky^2 with each direction's Nyquist dropped, i.e. the exact symbol of
// divergence(gradient(.)) under the odd-derivative convention
inline Symbol grad_squared_symbol(const Grid& g) {
    Symbol s = make_symbol(g);
    for (int jx = 0; jx < g.nx(); ++jx) {
        const double kx = (jx == g.nx() / 2) ? 0.0 : g.kx(jx);
        for (int jy = 0; jy < g.ny(); ++jy) {
            const double ky = (jy == g.ny() / 2) ? 0.0 : g.ky(jy);
            s.m[g.idx(jx, jy)] = kx * kx + ky * ky;
        }
    }
    return s;
}

} // namespace detail

inline ModelSymbols model_symbols(const ModelSpec& m, const Grid& g) {
    ModelSymbols sym{make_symbol(g), make_symbol(g), identity_symbol(g)};
    for (int jx = 0; jx < g.nx(); ++jx) {
        for (int jy = 0; jy < g.ny(); ++jy) {
            const std::size_t i = g.idx(jx, jy);
            const double k2 = g.kx(jx) * g.kx(jx) + g.ky(jy) * g.ky(jy);
            double lin = 0.0, mob = 1.0;
            switch (m.kind) {
                case ModelKind::Heat:
                    lin = 2.0 * m.D * k2;
                    mob = 1.0;
                    break;
                case ModelKind::AllenCahn:
                case ModelKind::SplitDoubleWell:
                    lin = m.epsilon * m.epsilon * k2;
                    mob = m.lambda;
                    break;
                case ModelKind::CahnHilliard:
                    lin = m.epsilon * m.epsilon * k2;
                    mob = m.lambda * k2;
                    break;
                case ModelKind::Mbe:
                    lin = m.epsilon * m.epsilon * k2 * k2;
                    mob = 1.0;
                    break;
                case ModelKind::Pfc: {
                    const double t = m.a0 - k2;
                    lin = t * t;
                    mob = m.lambda * k2;
                    break;
                }
                case ModelKind::Diblock:
                    lin = m.epsilon * m.epsilon * k2 + (k2 > 0.0 ? m.sigma / k2 : 0.0);
                    mob = m.lambda * k2;
                    break;
            }
            sym.lin.m[i] = lin;
            sym.mob.m[i] = mob;
        }
    }
    if (m.kind == ModelKind::Mbe) sym.reg = detail::grad_squared_symbol(g);
    return sym;
}

namespace detail {

inline void check_var(const ModelSpec& m, int i, const char* what) {
    if (i < 0 || i >= m.k)
        throw ShapeError(std::string(what) + ": variable index " + std::to_string(i) +
                         " out of range for k=" + std::to_string(m.k));
}

// (phi^2 - 1 - s) with per-model shift s; shared by the double-well family
inline double well_shift(const ModelSpec& m, int i) {
    switch (m.kind) {
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
        case ModelKind::Diblock: return m.gamma[i];
        case ModelKind::SplitDoubleWell: return m.gamma[i] / m.w[i];
        default: return 0.0;
    }
}

} // namespace detail

/** Pointwise density of the bulk potential F_i (for MBE it is a density in
 *  grad(phi), evaluated spectrally; that model is the one exception). */
inline Field bulk_density(const ModelSpec& m, int i, const Field& phi) {
    detail::check_var(m, i, "bulk_density");
    Field out = make_field(phi.grid);
    switch (m.kind) {
        case ModelKind::Heat: break;
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
        case ModelKind::Diblock:
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = phi.v[n] * phi.v[n] - 1.0;
                out.v[n] = 0.25 * t * t;
            }
            break;
        case ModelKind::SplitDoubleWell:
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = phi.v[n] * phi.v[n] - 1.0;
                out.v[n] = m.w[i] * 0.25 * t * t;
            }
            break;
        case ModelKind::Pfc:
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double p2 = phi.v[n] * phi.v[n];
                out.v[n] = 0.25 * p2 * p2 - 0.5 * m.b0 * p2;
            }
            break;
        case ModelKind::Mbe: {
            Gradient gr = gradient(phi);
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t =
                    gr.x.v[n] * gr.x.v[n] + gr.y.v[n] * gr.y.v[n] - 1.0;
                out.v[n] = 0.25 * t * t;
            }
            break;
        }
    }
    return out;
}

namespace detail {

// density under the square root of Q_i, i.e. Q_i^2 = int(density) + C_i
inline Field q_radicand_density(const ModelSpec& m, int i, const Field& phi) {
    Field out = make_field(phi.grid);
    switch (m.kind) {
        case ModelKind::Heat: break;
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
        case ModelKind::Diblock: {
            const double s = 1.0 + m.gamma[i];
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = phi.v[n] * phi.v[n] - s;
                out.v[n] = 0.25 * t * t;
            }
            break;
        }
        case ModelKind::SplitDoubleWell: {
            const double s = 1.0 + m.gamma[i] / m.w[i];
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = phi.v[n] * phi.v[n] - s;
                out.v[n] = m.w[i] * 0.25 * t * t;
            }
            break;
        }
        case ModelKind::Pfc: {
            const double s = m.b0 + m.gamma[i];
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = phi.v[n] * phi.v[n] - s;
                out.v[n] = 0.25 * t * t;
            }
            break;
        }
        case ModelKind::Mbe: {
            Gradient gr = gradient(phi);
            const double s = 1.0 + m.gamma[i];
            for (std::size_t n = 0; n < out.v.size(); ++n) {
                const double t = gr.x.v[n] * gr.x.v[n] + gr.y.v[n] * gr.y.v[n] - s;
                out.v[n] = 0.25 * t * t;
            }
            break;
        }
    }
    return out;
}

} // namespace detail

/** Q_i(phi) = sqrt(int q_radicand_i + C_i); throws QvarError unless positive. */
inline double Q_of(const ModelSpec& m, int i, const Field& phi) {
    detail::check_var(m, i, "Q_of");
    const double r = integrate(detail::q_radicand_density(m, i, phi)) + m.C[i];
    if (!(r > 0.0))
        throw QvarError("auxiliary variable " + std::to_string(i) + " ill posed: radicand " +
                        std::to_string(r) + " not positive");
    return std::sqrt(r);
}

/** V_i(phi) = F_i'(phi) - gamma_i * (reg phi), as a nodal field.
 *  MBE uses the conservative flux form -div[(|grad phi|^2 - 1 - gamma) grad phi]. */
inline Field nonlinear_term(const ModelSpec& m, int i, const Field& phibar) {
    detail::check_var(m, i, "nonlinear_term");
    Field out = make_field(phibar.grid);
    switch (m.kind) {
        case ModelKind::Heat: break;
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
        case ModelKind::Diblock: {
            const double s = 1.0 + m.gamma[i];
            for (std::size_t n = 0; n < out.v.size(); ++n)
                out.v[n] = phibar.v[n] * (phibar.v[n] * phibar.v[n] - s);
            break;
        }
        case ModelKind::SplitDoubleWell: {
            const double s = 1.0 + m.gamma[i] / m.w[i];
            for (std::size_t n = 0; n < out.v.size(); ++n)
                out.v[n] = m.w[i] * phibar.v[n] * (phibar.v[n] * phibar.v[n] - s);
            break;
        }
        case ModelKind::Pfc: {
            const double s = m.b0 + m.gamma[i];
            for (std::size_t n = 0; n < out.v.size(); ++n)
                out.v[n] = phibar.v[n] * (phibar.v[n] * phibar.v[n] - s);
            break;
        }
        case ModelKind::Mbe: {
            Gradient gr = gradient(phibar);
            Field fx = make_field(phibar.grid), fy = make_field(phibar.grid);
            const double s = 1.0 + m.gamma[i];
            for (std::size_t n = 0; n < fx.v.size(); ++n) {
                const double coef = gr.x.v[n] * gr.x.v[n] + gr.y.v[n] * gr.y.v[n] - s;
                fx.v[n] = coef * gr.x.v[n];
                fy.v[n] = coef * gr.y.v[n];
            }
            out = divergence(fx, fy);
            for (double& v : out.v) v = -v;
            break;
        }
    }
    return out;
}

/** (V_i(phibar), psi).  For MBE this is evaluated in the flux form
 *  int (|grad phibar|^2 - 1 - gamma) grad phibar . grad psi, which agrees with
 *  inner_product(nonlinear_term, psi) by the discrete divergence theorem. */
inline double v_pairing(const ModelSpec& m, int i, const Field& phibar, const Field& psi) {
    detail::check_var(m, i, "v_pairing");
    require_same_grid(phibar, psi, "v_pairing");
    if (m.kind == ModelKind::Mbe) {
        Gradient gb = gradient(phibar), gp = gradient(psi);
        Field prod = make_field(phibar.grid);
        const double s = 1.0 + m.gamma[i];
        for (std::size_t n = 0; n < prod.v.size(); ++n) {
            const double coef = gb.x.v[n] * gb.x.v[n] + gb.y.v[n] * gb.y.v[n] - s;
            prod.v[n] = coef * (gb.x.v[n] * gp.x.v[n] + gb.y.v[n] * gp.y.v[n]);
        }
        return integrate(prod);
    }
    return inner_product(nonlinear_term(m, i, phibar), psi);
}

/** Constant offset E_mod - E_orig at q_i = Q_i(phi); independent of phi. */
inline double energy_offset(const ModelSpec& m, const Grid& g) {
    double c = 0.0;
    switch (m.kind) {
        case ModelKind::Heat: break;
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard:
        case ModelKind::Diblock:
        case ModelKind::Mbe:
            c = 0.5 * m.gamma[0] + 0.25 * m.gamma[0] * m.gamma[0];
            break;
        case ModelKind::Pfc: {
            const double t = m.b0 + m.gamma[0];
            c = 0.25 * t * t;
            break;
        }
        case ModelKind::SplitDoubleWell:
            for (int i = 0; i < m.k; ++i)
                c += 0.5 * m.gamma[i] + 0.25 * m.gamma[i] * m.gamma[i] / m.w[i];
            break;
    }
    return c * g.area();
}

} // namespace rsav

#endif
