#ifndef RSAV_SIMULATION_HPP
#define RSAV_SIMULATION_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rsav/config.hpp"
#include "rsav/energy.hpp"
#include "rsav/initial.hpp"
#include "rsav/integrator.hpp"
#include "rsav/io.hpp"
#include "rsav/relaxation.hpp"

namespace rsav {

struct RunResult {
    std::vector<EnergyRecord> series;
    SavState state; // history pair at the final time
};

using SnapshotSink = std::function<void(const Field&, double t, long step)>;

/** Time-steps the configured model from t = 0 to T = n_steps * dt with
 *  n_steps = max(1, round(T / dt)).  Emits one series record at step 0, one
 *  every series_every steps, and one at the final step.  With law_asserts on,
 *  every step is checked against its discrete energy law and a violation
 *  raises SolverError. */
inline RunResult simulate(const RunConfig& cfg, bool law_asserts = true,
                          const SnapshotSink& sink = {}) {
    Grid g = make_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    const ModelSpec& m = cfg.model;
    ModelSymbols sym = model_symbols(m, g);
    StepOptions opt;
    opt.dealias = cfg.dealias;
    RelaxationConfig rc{cfg.eta};
    const bool relaxed = is_relaxed(cfg.scheme);
    const bool bdf2 = time_scheme_of(cfg.scheme) == TimeScheme::Bdf2;

    SavState s = init_state(m, make_initial(g, cfg));
    const long n_steps = std::max(1L, std::lround(cfg.T / cfg.dt));

    RunResult out;
    out.series.push_back(make_record(m, sym, s.phi_n, s.q_n, 0, 0.0, 1.0, 0.0, 0.0));
    if (sink && cfg.snapshot_every > 0) sink(s.phi_n, 0.0, 0);

    for (long n = 1; n <= n_steps; ++n) {
        const bool cn_step = !bdf2 || n == 1; // two-level start from a single-level state
        StepResult res =
            cn_step ? sav_cn_step(s, m, sym, cfg.dt, opt) : sav_bdf2_step(s, m, sym, cfg.dt, opt);
        const TimeScheme form = cn_step ? TimeScheme::CrankNicolson : TimeScheme::Bdf2;
        RelaxOutcome rel = relax_aux(m, s, res, form, cfg.dt, rc, relaxed);

        const SchemeTag law_tag = cn_step ? (relaxed ? SchemeTag::RsavCn : SchemeTag::SavCn)
                                          : cfg.scheme;
        const double law = law_residual(m, sym, s, res.phi_np1, rel.q_new, res.mu, law_tag,
                                        cfg.dt, cfg.eta);
        if (law_asserts) {
            const double scale =
                std::max(1.0, std::abs(modified_energy(m, sym, res.phi_np1, rel.q_new)));
            const bool bad = (law_tag == SchemeTag::SavCn) ? std::abs(law) > 1e-10 * scale
                                                           : law > 1e-10 * scale;
            if (bad)
                throw SolverError("energy law violated at step " + std::to_string(n) +
                                  ": residual " + std::to_string(law));
        }

        const double diss = res.diss, xi0 = rel.xi0;
        advance_state(s, std::move(res), rel.q_new, cfg.dt);
        s.t = cfg.dt * static_cast<double>(n); // keep recorded times free of drift

        if (n % cfg.series_every == 0 || n == n_steps)
            out.series.push_back(make_record(m, sym, s.phi_n, s.q_n, n, s.t, xi0, diss, law));
        if (sink && cfg.snapshot_every > 0 && (n % cfg.snapshot_every == 0 || n == n_steps))
            sink(s.phi_n, s.t, n);
    }

    out.state = std::move(s);
    return out;
}

/** Halves dt from the config value `levels` times and measures the Cauchy
 *  difference of the final states between consecutive levels, plus observed
 *  orders.  Every level must land exactly on T. */
inline std::vector<RefineRow> refine_study(const RunConfig& cfg, int levels,
                                           bool law_asserts = true) {
    if (levels < 2) throw ConfigError("refine needs at least 2 levels");
    std::vector<Field> finals;
    std::vector<std::vector<double>> final_q;
    std::vector<double> dts;
    for (int l = 0; l < levels; ++l) {
        RunConfig c = cfg;
        c.dt = cfg.dt * std::pow(0.5, l);
        const double n = cfg.T / c.dt;
        if (std::abs(n - std::lround(n)) > 1e-8 * std::max(1.0, n))
            throw ConfigError("T must be a whole number of steps at every refine level");
        c.series_every = std::max(1L, std::lround(n)); // only the endpoints matter here
        RunResult r = simulate(c, law_asserts);
        finals.push_back(std::move(r.state.phi_n));
        final_q.push_back(r.state.q_n);
        dts.push_back(c.dt);
    }

    std::vector<RefineRow> rows(levels);
    std::vector<double> phi_err(levels, 0.0), q_err(levels, 0.0);
    for (int l = 0; l < levels; ++l) {
        rows[l].level = l;
        rows[l].dt = dts[l];
        if (l + 1 < levels) {
            phi_err[l] = l2_norm(linear_combination(1.0, finals[l], -1.0, finals[l + 1]));
            for (std::size_t i = 0; i < final_q[l].size(); ++i)
                q_err[l] = std::max(q_err[l], std::abs(final_q[l][i] - final_q[l + 1][i]));
            rows[l].has_error = true;
            rows[l].phi_error = phi_err[l];
            rows[l].q_error = q_err[l];
        }
        if (l >= 1 && l + 1 < levels) {
            if (phi_err[l] > 0.0 && phi_err[l - 1] > 0.0) {
                rows[l].has_phi_order = true;
                rows[l].phi_order = std::log2(phi_err[l - 1] / phi_err[l]);
            }
            if (q_err[l] > 0.0 && q_err[l - 1] > 0.0) {
                rows[l].has_q_order = true;
                rows[l].q_order = std::log2(q_err[l - 1] / q_err[l]);
            }
        }
    }
    return rows;
}

struct CompareResult {
    RunResult baseline;
    RunResult relaxed;
    std::vector<CompareRow> rows;
};

/** Runs the configured relaxed scheme and its plain counterpart side by side
 *  and tabulates how far each auxiliary variable drifts from the quantity it
 *  shadows. */
inline CompareResult compare_runs(const RunConfig& cfg, bool law_asserts = true) {
    if (!is_relaxed(cfg.scheme))
        throw ConfigError("compare needs a relaxed scheme (rsav-cn or rsav-bdf2)");
    RunConfig base = cfg;
    base.scheme = time_scheme_of(cfg.scheme) == TimeScheme::CrankNicolson ? SchemeTag::SavCn
                                                                          : SchemeTag::SavBdf2;
    CompareResult out;
    out.relaxed = simulate(cfg, law_asserts);
    out.baseline = simulate(base, law_asserts);

    if (out.baseline.series.size() != out.relaxed.series.size())
        throw SolverError("compare runs produced mismatched series lengths");
    auto gap = [](const EnergyRecord& r) {
        double worst = 0.0;
        for (std::size_t i = 0; i < r.q.size(); ++i)
            worst = std::max(worst, std::abs(r.q[i] - r.Qphi[i]));
        return worst;
    };
    for (std::size_t i = 0; i < out.baseline.series.size(); ++i) {
        const EnergyRecord& b = out.baseline.series[i];
        const EnergyRecord& r = out.relaxed.series[i];
        out.rows.push_back(CompareRow{b.step, b.t, gap(b), gap(r), r.xi0});
    }
    return out;
}

} // namespace rsav

#endif
