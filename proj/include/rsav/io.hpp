#ifndef RSAV_IO_HPP
#define RSAV_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rsav/energy.hpp"
#include "rsav/errors.hpp"
#include "rsav/field.hpp"

// On-disk formats.  All text numbers are printed with %.17g so a write/read
// cycle is lossless for doubles.  The binary snapshot layout is: the 4 bytes
// "FLD1", then t, Nx, Ny, Lx, Ly as little-endian float64, then Nx*Ny nodal
// values in the Field's own layout (x index outermost).  This code assumes a
// little-endian host.

namespace rsav {

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline double get_f64(std::istream& in) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace detail

inline void write_series_csv(const std::string& path, const std::vector<EnergyRecord>& rows,
                             int k) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "step,t,E_orig,E_mod";
    for (int i = 1; i <= k; ++i) out << ",q_" << i;
    for (int i = 1; i <= k; ++i) out << ",Q_" << i;
    out << ",xi0,mass,diss,law_residual\n";
    for (const EnergyRecord& r : rows) {
        out << r.step << ',' << detail::g17(r.t) << ',' << detail::g17(r.E_orig) << ','
            << detail::g17(r.E_mod);
        for (double q : r.q) out << ',' << detail::g17(q);
        for (double Q : r.Qphi) out << ',' << detail::g17(Q);
        out << ',' << detail::g17(r.xi0) << ',' << detail::g17(r.mass) << ','
            << detail::g17(r.diss) << ',' << detail::g17(r.law_residual) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline void write_snapshot_text(const std::string& path, const Field& f, double t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const Grid& g = f.grid;
    out << "# t=" << detail::g17(t) << '\n';
    out << "# Nx=" << g.nx() << " Ny=" << g.ny() << " Lx=" << detail::g17(g.lx())
        << " Ly=" << detail::g17(g.ly()) << '\n';
    for (int iy = 0; iy < g.ny(); ++iy) { // one row per y level
        for (int ix = 0; ix < g.nx(); ++ix) {
            if (ix) out << ' ';
            out << detail::g17(f.v[g.idx(ix, iy)]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline void write_snapshot_binary(const std::string& path, const Field& f, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const Grid& g = f.grid;
    out.write("FLD1", 4);
    detail::put_f64(out, t);
    detail::put_f64(out, static_cast<double>(g.nx()));
    detail::put_f64(out, static_cast<double>(g.ny()));
    detail::put_f64(out, g.lx());
    detail::put_f64(out, g.ly());
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!out) throw IoError("failed writing '" + path + "'");
}

struct Snapshot {
    double t = 0.0;
    Field field;
};

/** Reads either snapshot format back, detecting binary by its magic bytes. */
inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open '" + path + "'");
    char magic[4] = {};
    probe.read(magic, 4);

    if (probe.gcount() == 4 && std::memcmp(magic, "FLD1", 4) == 0) {
        Snapshot snap;
        snap.t = detail::get_f64(probe);
        const int nx = static_cast<int>(detail::get_f64(probe));
        const int ny = static_cast<int>(detail::get_f64(probe));
        const double lx = detail::get_f64(probe);
        const double ly = detail::get_f64(probe);
        if (!probe) throw IoError("truncated snapshot header in '" + path + "'");
        Grid g = make_grid(nx, ny, lx, ly);
        snap.field = make_field(g);
        probe.read(reinterpret_cast<char*>(snap.field.v.data()),
                   static_cast<std::streamsize>(snap.field.v.size() * sizeof(double)));
        if (probe.gcount() != static_cast<std::streamsize>(snap.field.v.size() * sizeof(double)))
            throw IoError("truncated snapshot data in '" + path + "'");
        return snap;
    }

    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    Snapshot snap;
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "# t=%lf", &snap.t) != 1)
        throw IoError("bad snapshot time header in '" + path + "'");
    if (!std::getline(in, line) ||
        std::sscanf(line.c_str(), "# Nx=%d Ny=%d Lx=%lf Ly=%lf", &nx, &ny, &lx, &ly) != 4)
        throw IoError("bad snapshot grid header in '" + path + "'");
    Grid g = make_grid(nx, ny, lx, ly);
    snap.field = make_field(g);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            if (!(in >> snap.field.v[g.idx(ix, iy)]))
                throw IoError("truncated snapshot data in '" + path + "'");
    return snap;
}

struct RefineRow {
    int level = 0;
    double dt = 0.0;
    bool has_error = false; // a finer level exists to difference against
    double phi_error = 0.0, q_error = 0.0;
    bool has_phi_order = false, has_q_order = false;
    double phi_order = 0.0, q_order = 0.0;
};

inline void write_refine_csv(const std::string& path, const std::vector<RefineRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "level,dt,phi_error,phi_order,q_error,q_order\n";
    for (const RefineRow& r : rows) {
        out << r.level << ',' << detail::g17(r.dt) << ',';
        out << (r.has_error ? detail::g17(r.phi_error) : "n/a") << ',';
        out << (r.has_phi_order ? detail::g17(r.phi_order) : "n/a") << ',';
        out << (r.has_error ? detail::g17(r.q_error) : "n/a") << ',';
        out << (r.has_q_order ? detail::g17(r.q_order) : "n/a") << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

struct CompareRow {
    long step = 0;
    double t = 0.0;
    double gap_baseline = 0.0; // max_i |q_i - Q_i(phi)| for the plain scheme
    double gap_relaxed = 0.0;  // same for the relaxed scheme
    double xi0 = 1.0;
};

inline void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "step,t,gap_baseline,gap_relaxed,xi0\n";
    for (const CompareRow& r : rows)
        out << r.step << ',' << detail::g17(r.t) << ',' << detail::g17(r.gap_baseline) << ','
            << detail::g17(r.gap_relaxed) << ',' << detail::g17(r.xi0) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace rsav

#endif
