#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <system_error>

#include "rsav/config.hpp"
#include "rsav/simulation.hpp"

// Command-line front end.  Exit codes: 0 success, 2 configuration problem,
// 3 numerical failure (divergence, energy-law violation, ill-posed setup),
// 4 output I/O failure.

namespace fs = std::filesystem;
using namespace rsav;

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

SnapshotSink snapshot_sink(const RunConfig& cfg) {
    if (cfg.snapshot_every <= 0) return {};
    const bool binary = cfg.snapshot_format == "binary";
    const std::string dir = cfg.out_dir;
    return [dir, binary](const Field& f, double t, long step) {
        char name[64];
        std::snprintf(name, sizeof name, "snap_%08ld.%s", step, binary ? "bin" : "txt");
        const std::string path = dir + "/" + name;
        if (binary)
            write_snapshot_binary(path, f, t);
        else
            write_snapshot_text(path, f, t);
    };
}

void cmd_run(const RunConfig& cfg, bool asserts) {
    ensure_dir(cfg.out_dir);
    RunResult r = simulate(cfg, asserts, snapshot_sink(cfg));
    const std::string series_path = cfg.out_dir + "/series.csv";
    write_series_csv(series_path, r.series, cfg.model.k);

    const EnergyRecord& last = r.series.back();
    double min_xi = 1.0, max_gap = 0.0;
    bool monotone = true;
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const EnergyRecord& rec = r.series[i];
        min_xi = std::min(min_xi, rec.xi0);
        for (std::size_t j = 0; j < rec.q.size(); ++j)
            max_gap = std::max(max_gap, std::abs(rec.q[j] - rec.Qphi[j]));
        if (i > 0 && rec.E_mod > r.series[i - 1].E_mod + 1e-10 * std::max(1.0, std::abs(rec.E_mod)))
            monotone = false;
    }
    std::printf("model=%s scheme=%s grid=%dx%d dt=%g steps=%ld\n", model_name(cfg.model.kind),
                scheme_name(cfg.scheme), cfg.nx, cfg.ny, cfg.dt, last.step);
    std::printf("final t=%g E_orig=%.10g E_mod=%.10g mass=%.10g\n", last.t, last.E_orig,
                last.E_mod, last.mass);
    std::printf("max|q-Q|=%.3e min_xi0=%g E_mod_monotone=%s\n", max_gap, min_xi,
                monotone ? "yes" : "no");
    std::printf("wrote %s\n", series_path.c_str());
}

void cmd_refine(const RunConfig& cfg, int levels, bool asserts) {
    ensure_dir(cfg.out_dir);
    std::vector<RefineRow> rows = refine_study(cfg, levels, asserts);
    const std::string path = cfg.out_dir + "/refine.csv";
    write_refine_csv(path, rows);
    std::printf("%-6s %-12s %-14s %-9s %-14s %-9s\n", "level", "dt", "phi_error", "order",
                "q_error", "order");
    for (const RefineRow& r : rows) {
        char phi_e[32] = "n/a", phi_o[32] = "n/a", q_e[32] = "n/a", q_o[32] = "n/a";
        if (r.has_error) {
            std::snprintf(phi_e, sizeof phi_e, "%.6e", r.phi_error);
            std::snprintf(q_e, sizeof q_e, "%.6e", r.q_error);
        }
        if (r.has_phi_order) std::snprintf(phi_o, sizeof phi_o, "%.3f", r.phi_order);
        if (r.has_q_order) std::snprintf(q_o, sizeof q_o, "%.3f", r.q_order);
        std::printf("%-6d %-12g %-14s %-9s %-14s %-9s\n", r.level, r.dt, phi_e, phi_o, q_e, q_o);
    }
    std::printf("wrote %s\n", path.c_str());
}

void cmd_compare(const RunConfig& cfg, bool asserts) {
    ensure_dir(cfg.out_dir);
    CompareResult cmp = compare_runs(cfg, asserts);
    write_compare_csv(cfg.out_dir + "/compare.csv", cmp.rows);
    write_series_csv(cfg.out_dir + "/series_baseline.csv", cmp.baseline.series, cfg.model.k);
    write_series_csv(cfg.out_dir + "/series_relaxed.csv", cmp.relaxed.series, cfg.model.k);

    double base_gap = 0.0, rel_gap = 0.0, min_xi = 1.0;
    bool tighter = true;
    for (const CompareRow& row : cmp.rows) {
        base_gap = std::max(base_gap, row.gap_baseline);
        rel_gap = std::max(rel_gap, row.gap_relaxed);
        min_xi = std::min(min_xi, row.xi0);
        if (row.gap_relaxed > row.gap_baseline + 1e-12) tighter = false;
    }
    std::printf("baseline max|q-Q|=%.6e relaxed max|q-Q|=%.6e min_xi0=%g\n", base_gap, rel_gap,
                min_xi);
    std::printf("relaxed tracks at least as tightly at every output step: %s\n",
                tighter ? "yes" : "no");
    std::printf("wrote %s\n", (cfg.out_dir + "/compare.csv").c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic pseudo-spectral phase-field solver with auxiliary-variable stepping"};
    app.require_subcommand(1);

    std::string cfg_path, out_dir;
    std::uint64_t seed = 0;
    bool no_asserts = false;
    int levels = 7;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", cfg_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config's out_dir)");
        sub->add_option("--seed", seed, "override the seed for random initial data");
        sub->add_flag("--no-asserts", no_asserts, "skip per-step energy-law checks");
    };
    CLI::App* run_cmd =
        app.add_subcommand("run", "integrate one configuration; write series.csv and snapshots");
    add_common(run_cmd);
    CLI::App* refine_cmd =
        app.add_subcommand("refine", "halve dt per level and report Cauchy errors and orders");
    add_common(refine_cmd);
    refine_cmd->add_option("--levels", levels, "number of dt levels")->capture_default_str();
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "run a relaxed scheme next to its plain counterpart");
    add_common(compare_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        RunConfig cfg = parse_config_file(cfg_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (active->count("--seed") > 0) {
            if (cfg.ic != "random")
                throw ConfigError("--seed only applies to configs with ic = random");
            cfg.seed = seed;
        }
        if (active == run_cmd)
            cmd_run(cfg, !no_asserts);
        else if (active == refine_cmd)
            cmd_refine(cfg, levels, !no_asserts);
        else
            cmd_compare(cfg, !no_asserts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
