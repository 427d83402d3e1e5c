#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rsav/model.hpp"
#include "rsav/operators.hpp"

using namespace rsav;

namespace {

Field eval(const Grid& g, double (*fn)(double, double)) {
    Field f = make_field(g);
    for (int ix = 0; ix < g.nx(); ++ix)
        for (int iy = 0; iy < g.ny(); ++iy) f.v[g.idx(ix, iy)] = fn(g.x(ix), g.y(iy));
    return f;
}

const ModelKind all_kinds[] = {ModelKind::Heat,    ModelKind::AllenCahn,
                               ModelKind::CahnHilliard, ModelKind::Mbe,
                               ModelKind::Pfc,     ModelKind::Diblock,
                               ModelKind::SplitDoubleWell};

// smooth low-mode test functions
double trig_a(double x, double y) { return 0.5 * std::sin(x) * std::cos(y) + 0.1; }
double trig_b(double x, double y) { return std::cos(x) + 0.2 * std::sin(y); }

} // namespace

TEST_CASE("model names round trip") {
    for (ModelKind kind : all_kinds) CHECK(model_from_name(model_name(kind)) == kind);
    CHECK_THROWS_AS(model_from_name("burgers"), CatalogError);
}

TEST_CASE("default catalog passes validation") {
    for (ModelKind kind : all_kinds) CHECK_NOTHROW(validate_model(default_model(kind)));
}

TEST_CASE("catalog rejects out-of-range parameters") {
    ModelSpec m = default_model(ModelKind::AllenCahn);
    m.epsilon = 0.0;
    CHECK_THROWS_AS(validate_model(m), CatalogError);

    m = default_model(ModelKind::Heat);
    m.gamma = {0.5};
    CHECK_THROWS_AS(validate_model(m), CatalogError);
    m = default_model(ModelKind::Heat);
    m.D = -1.0;
    CHECK_THROWS_AS(validate_model(m), CatalogError);

    m = default_model(ModelKind::AllenCahn);
    m.gamma = {1.0, 2.0};
    CHECK_THROWS_AS(validate_model(m), CatalogError);
    m = default_model(ModelKind::AllenCahn);
    m.C = {-0.25};
    CHECK_THROWS_AS(validate_model(m), CatalogError);
    m = default_model(ModelKind::AllenCahn);
    m.gamma = {-1.0};
    CHECK_THROWS_AS(validate_model(m), CatalogError);

    m = default_model(ModelKind::SplitDoubleWell);
    m.w = {0.3, 0.3};
    CHECK_THROWS_AS(validate_model(m), CatalogError);

    m = default_model(ModelKind::Diblock);
    m.sigma = -1.0;
    CHECK_THROWS_AS(validate_model(m), CatalogError);
}

TEST_CASE("linear and mobility symbols at selected modes") {
    Grid g = make_grid(8, 8, 2.0 * M_PI, 2.0 * M_PI); // integer wavenumbers
    auto at = [&g](const Symbol& s, int jx, int jy) { return s.m[g.idx(jx, jy)]; };

    ModelSymbols heat = model_symbols(default_model(ModelKind::Heat), g);
    CHECK(at(heat.lin, 1, 0) == Catch::Approx(2.0).margin(1e-14));
    CHECK(at(heat.lin, 2, 1) == Catch::Approx(10.0).margin(1e-13));
    CHECK(at(heat.mob, 3, 2) == 1.0);

    ModelSymbols ac = model_symbols(default_model(ModelKind::AllenCahn), g);
    CHECK(at(ac.lin, 1, 0) == Catch::Approx(1e-4).margin(1e-18));
    CHECK(at(ac.mob, 1, 0) == 1.0);
    CHECK(at(ac.reg, 3, 2) == 1.0); // identity shift channel

    ModelSymbols ch = model_symbols(default_model(ModelKind::CahnHilliard), g);
    CHECK(at(ch.lin, 2, 1) == Catch::Approx(5e-4).margin(1e-17));
    CHECK(at(ch.mob, 2, 1) == Catch::Approx(0.05).margin(1e-15));
    CHECK(at(ch.mob, 0, 0) == 0.0);

    ModelSymbols mbe = model_symbols(default_model(ModelKind::Mbe), g);
    CHECK(at(mbe.lin, 2, 1) == Catch::Approx(0.01 * 25.0).margin(1e-13));
    CHECK(at(mbe.reg, 1, 0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(at(mbe.reg, 4, 0) == 0.0); // Nyquist column drops out of grad form
    CHECK(at(mbe.lin, 4, 0) == Catch::Approx(0.01 * 256.0).margin(1e-12));

    ModelSymbols pfc = model_symbols(default_model(ModelKind::Pfc), g);
    CHECK(at(pfc.lin, 1, 0) == Catch::Approx(0.0).margin(1e-14)); // (a0 - 1)^2
    CHECK(at(pfc.lin, 2, 0) == Catch::Approx(9.0).margin(1e-12));
    CHECK(at(pfc.mob, 1, 1) == Catch::Approx(2.0).margin(1e-14));

    ModelSymbols db = model_symbols(default_model(ModelKind::Diblock), g);
    CHECK(at(db.lin, 0, 0) == 0.0); // long-range term excludes the mean
    CHECK(at(db.lin, 2, 0) == Catch::Approx(1e-4 * 4.0 + 0.25).margin(1e-14));
    CHECK(at(db.mob, 2, 0) == Catch::Approx(0.4).margin(1e-14));
}

TEST_CASE("bulk densities match closed forms") {
    Grid g = make_grid(8, 8, 1.0, 1.0);
    Field two = make_field(g, 2.0);

    ModelSpec ac = default_model(ModelKind::AllenCahn);
    CHECK(bulk_density(ac, 0, two).v[0] == Catch::Approx(2.25).margin(1e-14));

    ModelSpec pfc = default_model(ModelKind::Pfc);
    CHECK(bulk_density(pfc, 0, two).v[0] == Catch::Approx(4.0 - 0.65).margin(1e-13));

    ModelSpec heat = default_model(ModelKind::Heat);
    CHECK(bulk_density(heat, 0, two).v[5] == 0.0);

    ModelSpec sdw = default_model(ModelKind::SplitDoubleWell);
    CHECK(bulk_density(sdw, 0, two).v[0] == Catch::Approx(0.5 * 2.25).margin(1e-14));

    // MBE density depends on grad(phi): for phi = sin x it is 1/4 sin^4 x
    Grid gt = make_grid(32, 32, 2.0 * M_PI, 2.0 * M_PI);
    Field s = eval(gt, [](double x, double) { return std::sin(x); });
    Field got = bulk_density(default_model(ModelKind::Mbe), 0, s);
    for (int ix = 0; ix < gt.nx(); ++ix) {
        const double sx = std::sin(gt.x(ix));
        CHECK(got.v[gt.idx(ix, 7)] == Catch::Approx(0.25 * sx * sx * sx * sx).margin(1e-12));
    }
}

TEST_CASE("auxiliary amplitude Q matches closed forms") {
    Grid unit = make_grid(8, 8, 1.0, 1.0);
    ModelSpec ac = default_model(ModelKind::AllenCahn);
    // phi = 0: radicand density 1/4 (0 - 2)^2 = 1, area 1, plus C = 1
    CHECK(Q_of(ac, 0, make_field(unit, 0.0)) == Catch::Approx(std::sqrt(2.0)).margin(1e-14));

    Grid four = make_grid(8, 8, 2.0, 2.0);
    ModelSpec mbe = default_model(ModelKind::Mbe); // gamma = 4, C = 0
    // constant field: |grad| = 0, density 1/4 (0 - 5)^2 = 25/4 over area 4
    CHECK(Q_of(mbe, 0, make_field(four, 0.7)) == Catch::Approx(5.0).margin(1e-13));

    ModelSpec heat = default_model(ModelKind::Heat);
    CHECK(Q_of(heat, 0, make_field(unit)) == Catch::Approx(1.0).margin(1e-15));
    heat.C = {0.0}; // F = 0 leaves nothing under the root
    CHECK_THROWS_AS(Q_of(heat, 0, make_field(unit)), QvarError);

    CHECK_THROWS_AS(Q_of(ac, 1, make_field(unit)), ShapeError);
}

TEST_CASE("nonlinear terms match closed forms") {
    Grid g = make_grid(8, 8, 1.0, 1.0);
    Field two = make_field(g, 2.0);

    ModelSpec ac = default_model(ModelKind::AllenCahn);
    CHECK(nonlinear_term(ac, 0, two).v[3] == Catch::Approx(4.0).margin(1e-14));

    ModelSpec pfc = default_model(ModelKind::Pfc);
    Field half = make_field(g, 0.5);
    CHECK(nonlinear_term(pfc, 0, half).v[0] == Catch::Approx(-0.5375).margin(1e-14));

    ModelSpec sdw = default_model(ModelKind::SplitDoubleWell);
    CHECK(nonlinear_term(sdw, 0, two).v[0] == Catch::Approx(2.0).margin(1e-14));

    // phi = sin x, gamma = 4: -d/dx[(cos^2 x - 5) cos x] = sin x (3 cos^2 x - 5)
    Grid gt = make_grid(64, 64, 2.0 * M_PI, 2.0 * M_PI);
    Field s = eval(gt, [](double x, double) { return std::sin(x); });
    Field got = nonlinear_term(default_model(ModelKind::Mbe), 0, s);
    for (int ix = 0; ix < gt.nx(); ix += 5) {
        const double sx = std::sin(gt.x(ix)), cx = std::cos(gt.x(ix));
        CHECK(got.v[gt.idx(ix, 11)] == Catch::Approx(sx * (3.0 * cx * cx - 5.0)).margin(1e-11));
    }
}

TEST_CASE("flux and divergence pairings agree") {
    Grid g = make_grid(64, 64, 2.0 * M_PI, 2.0 * M_PI);
    Field phi = eval(g, trig_a);
    Field psi = eval(g, trig_b);
    ModelSpec mbe = default_model(ModelKind::Mbe);
    const double flux = v_pairing(mbe, 0, phi, psi);
    const double divr = inner_product(nonlinear_term(mbe, 0, phi), psi);
    CHECK(flux == Catch::Approx(divr).margin(1e-10 * std::max(1.0, std::abs(flux))));

    // constant example: V = phi (phi^2 - 2) = 4 over the unit square
    Grid unit = make_grid(8, 8, 1.0, 1.0);
    ModelSpec ac = default_model(ModelKind::AllenCahn);
    CHECK(v_pairing(ac, 0, make_field(unit, 2.0), make_field(unit, 1.0)) ==
          Catch::Approx(4.0).margin(1e-13));
}

TEST_CASE("pairings are the variation of the bulk integral") {
    Grid g = make_grid(64, 64, 2.0 * M_PI, 2.0 * M_PI);
    Field phi = eval(g, trig_a);
    Field psi = eval(g, trig_b);
    const double h = 1e-5;

    for (ModelKind kind : all_kinds) {
        if (kind == ModelKind::Heat) continue; // no bulk part
        ModelSpec m = default_model(kind);
        ModelSymbols sym = model_symbols(m, g);
        for (int i = 0; i < m.k; ++i) {
            Field plus = linear_combination(1.0, phi, h, psi);
            Field minus = linear_combination(1.0, phi, -h, psi);
            const double fd =
                (integrate(bulk_density(m, i, plus)) - integrate(bulk_density(m, i, minus))) /
                (2.0 * h);
            const double analytic =
                v_pairing(m, i, phi, psi) +
                m.gamma[i] * inner_product(apply_operator(sym.reg, phi), psi);
            INFO(model_name(kind) << " variable " << i);
            CHECK(fd == Catch::Approx(analytic).margin(1e-6));
        }
    }
}

TEST_CASE("split double well reassembles the single well") {
    Grid g = make_grid(32, 32, 2.0 * M_PI, 2.0 * M_PI);
    Field phi = eval(g, [](double x, double y) { return 0.8 * std::sin(x) + 0.3 * std::cos(y); });

    ModelSpec sdw = default_model(ModelKind::SplitDoubleWell);
    ModelSpec ac = default_model(ModelKind::AllenCahn); // gamma = 1, C = 1

    // sum of squared amplitudes matches the single-variable amplitude
    const double sum_q2 = std::pow(Q_of(sdw, 0, phi), 2) + std::pow(Q_of(sdw, 1, phi), 2);
    CHECK(sum_q2 == Catch::Approx(std::pow(Q_of(ac, 0, phi), 2)).epsilon(1e-12));

    Field t_sum = nonlinear_term(sdw, 0, phi);
    add_scaled(t_sum, 1.0, nonlinear_term(sdw, 1, phi));
    Field t_ac = nonlinear_term(ac, 0, phi);
    for (std::size_t n = 0; n < t_sum.v.size(); n += 17)
        CHECK(t_sum.v[n] == Catch::Approx(t_ac.v[n]).margin(1e-13));

    CHECK(energy_offset(sdw, g) == Catch::Approx(energy_offset(ac, g)).epsilon(1e-14));
}

TEST_CASE("energy offset closed forms") {
    Grid g = make_grid(8, 8, 2.0, 3.0); // area 6
    CHECK(energy_offset(default_model(ModelKind::Heat), g) == 0.0);
    CHECK(energy_offset(default_model(ModelKind::AllenCahn), g) ==
          Catch::Approx(0.75 * 6.0).margin(1e-13));
    CHECK(energy_offset(default_model(ModelKind::CahnHilliard), g) ==
          Catch::Approx(6.0 * 6.0).margin(1e-12));
    CHECK(energy_offset(default_model(ModelKind::Pfc), g) ==
          Catch::Approx(0.25 * 1.325 * 1.325 * 6.0).margin(1e-13));
}
