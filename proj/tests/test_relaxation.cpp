#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rsav/relaxation.hpp"

using namespace rsav;

namespace {

double quadratic_cn(double xi, const std::vector<double>& qt, const std::vector<double>& Q,
                    double B) {
    double v = -B;
    for (std::size_t i = 0; i < qt.size(); ++i) {
        const double q = xi * qt[i] + (1.0 - xi) * Q[i];
        v += q * q - qt[i] * qt[i];
    }
    return v;
}

double quadratic_bdf2(double xi, const std::vector<double>& qt, const std::vector<double>& Q,
                      const std::vector<double>& qn, double B) {
    double v = -B;
    for (std::size_t i = 0; i < qt.size(); ++i) {
        const double q = xi * qt[i] + (1.0 - xi) * Q[i];
        const double tq = 2.0 * q - qn[i];
        const double tqt = 2.0 * qt[i] - qn[i];
        v += q * q + tq * tq - qt[i] * qt[i] - tqt * tqt;
    }
    return v;
}

} // namespace

TEST_CASE("solve_xi picks the smaller root and clamps") {
    // roots 1 and 11: the plain scheme value xi = 1 is already the minimum
    CHECK(solve_xi(0.04, -0.48, 0.44) == Catch::Approx(1.0).margin(1e-14));
    // roots -2.2 and 1: fully relaxed
    CHECK(solve_xi(5.0, 6.0, -11.0) == 0.0);
    // degenerate quadratic: xi = 0 feasible iff c <= 0
    CHECK(solve_xi(0.0, 2.0, -1.0) == 0.0);
    CHECK(solve_xi(0.0, -2.0, 1.0) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("single-variable blend, no budget") {
    auto out = optimal_xi_cn({1.0}, {1.2}, 0.0);
    CHECK(out.xi0 == Catch::Approx(1.0).margin(1e-14));
    CHECK(out.q_new[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(out.constraint_residual) < 1e-14);

    auto bdf = optimal_xi_bdf2({2.0}, {1.0}, {1.0}, 0.0);
    CHECK(bdf.xi0 == 0.0);
    CHECK(bdf.q_new[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(bdf.constraint_residual == Catch::Approx(-11.0).margin(1e-13));
}

TEST_CASE("budget moves the blend toward the field value") {
    // a = 0.04, b = -0.48, c = 0.44 - B
    auto mid = optimal_xi_cn({1.0}, {1.2}, 0.2);
    CHECK(mid.xi0 == Catch::Approx(0.5227744249483375).margin(1e-12));
    CHECK(std::abs(mid.constraint_residual) < 1e-14);

    auto big = optimal_xi_cn({1.0}, {1.2}, 1.0);
    CHECK(big.xi0 == 0.0);
    CHECK(big.q_new[0] == 1.2);
    CHECK(big.constraint_residual == Catch::Approx(-0.56).margin(1e-14));
}

TEST_CASE("coincident values force a zero quadratic coefficient") {
    auto out = optimal_xi_cn({0.7, -0.3}, {0.7, -0.3}, 0.5);
    CHECK(out.xi0 == 0.0);
    CHECK(out.q_new[0] == 0.7);
    CHECK(out.q_new[1] == -0.3);
}

TEST_CASE("randomized sweep keeps every relaxation invariant") {
    std::mt19937_64 rng(20260825);
    std::uniform_real_distribution<double> qdist(-3.0, 3.0);
    std::uniform_real_distribution<double> Qdist(0.05, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 20000; ++trial) {
        const int k = 1 + (trial % 3 == 0 ? 1 : 0);
        std::vector<double> qt(k), Q(k), qn(k);
        for (int i = 0; i < k; ++i) {
            qt[i] = qdist(rng);
            Q[i] = Qdist(rng);
            qn[i] = qdist(rng);
        }
        const double B = (trial % 4 == 0) ? 0.0 : unit(rng);
        const bool cn = trial % 2 == 0;

        RelaxOutcome out = cn ? optimal_xi_cn(qt, Q, B) : optimal_xi_bdf2(qt, Q, qn, B);
        INFO((cn ? "cn" : "bdf2") << " trial " << trial);

        REQUIRE(out.xi0 >= 0.0);
        REQUIRE(out.xi0 <= 1.0);

        auto eval = [&](double xi) {
            return cn ? quadratic_cn(xi, qt, Q, B) : quadratic_bdf2(xi, qt, Q, qn, B);
        };
        const double scale = std::max(1.0, std::abs(eval(0.0)) + std::abs(eval(1.0)));

        // xi = 1 always feasible (the unrelaxed step spends no budget)
        REQUIRE(eval(1.0) <= 1e-12 * scale);
        // the chosen xi satisfies the constraint
        REQUIRE(eval(out.xi0) <= 1e-10 * scale);
        // minimality: just below an interior root the constraint fails
        if (out.xi0 > 1e-6 && out.xi0 < 1.0 - 1e-12)
            REQUIRE(eval(out.xi0 - 1e-6) > -1e-10 * scale);
        // blend identity per variable
        for (int i = 0; i < k; ++i)
            REQUIRE(std::abs(out.q_new[i] - Q[i]) ==
                    Catch::Approx(out.xi0 * std::abs(qt[i] - Q[i])).margin(1e-12 * scale));
        // a larger budget never needs a larger xi
        RelaxOutcome wider =
            cn ? optimal_xi_cn(qt, Q, B + 0.5) : optimal_xi_bdf2(qt, Q, qn, B + 0.5);
        REQUIRE(wider.xi0 <= out.xi0 + 1e-12);
    }
}

TEST_CASE("budget helper clamps negative dissipation and validates eta") {
    RelaxationConfig rc;
    CHECK(relax_budget(-5.0, 0.1, rc) == 0.0);
    CHECK(relax_budget(2.0, 0.1, rc) == Catch::Approx(0.19).margin(1e-15));
    rc.eta = 1.5;
    CHECK_THROWS_AS(relax_budget(1.0, 0.1, rc), SolverError);
}

TEST_CASE("relax_aux honours the enabled switch") {
    Grid g = make_grid(8, 8, 1.0, 1.0);
    ModelSpec m = default_model(ModelKind::AllenCahn);
    SavState s = init_state(m, make_field(g, 0.0));

    StepResult res;
    res.phi_np1 = make_field(g, 0.0); // Q(phi) = sqrt(2)
    res.q_tilde = {1.5};
    res.mu = make_field(g);
    res.diss = 0.0;

    RelaxationConfig rc;
    RelaxOutcome off = relax_aux(m, s, res, TimeScheme::CrankNicolson, 0.1, rc, false);
    CHECK(off.xi0 == 1.0);
    CHECK(off.q_new[0] == 1.5);

    // |blend| <= |q_tilde| holds for every xi here, so the optimum is xi = 0
    RelaxOutcome on = relax_aux(m, s, res, TimeScheme::CrankNicolson, 0.1, rc, true);
    CHECK(on.xi0 == 0.0);
    CHECK(on.q_new[0] == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
}
