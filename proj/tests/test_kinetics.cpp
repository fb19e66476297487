#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "stressnet/kinetics.hpp"

using namespace stressnet;

namespace {

ZoneKineticsParams zone1_params() {
    ZoneKineticsParams p;
    p.a = 0.01;
    p.b = 0.005;
    p.alpha_P = 0.7;
    p.alpha_N = 0.4;
    return p;
}

Grid small_grid() { return Grid(4, 4, 0.0, 0.0, 0.25, 0.25, 1); }

}  // namespace

TEST_CASE("xi saturation profile") {
    CHECK(xi(0.0) == 0.0);
    CHECK(xi(1.0) == 0.5);
    CHECK(xi(2.0) == doctest::Approx(0.8).epsilon(1e-15));
    // Monotone increasing on s >= 0, asymptote at 1.
    double prev = -1.0;
    for (double s = 0.0; s <= 8.0; s += 0.125) {
        double v = xi(s);
        CHECK(v > prev);
        CHECK(v < 1.0);
        prev = v;
    }
    CHECK(xi(1e8) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("imitation coefficient reference values") {
    ZoneKineticsParams p = zone1_params();
    CHECK(imitation_coefficient(0.3, 0.1, p) ==
          doctest::Approx(0.5899989799951799).epsilon(1e-12));
    CHECK(imitation_coefficient(0.2, 0.3, p) ==
          doctest::Approx(-0.0615386035478562).epsilon(1e-12));
}

TEST_CASE("imitation coefficient limits and symmetry") {
    ZoneKineticsParams p = zone1_params();
    // Both species absent: both ratios are 0, coefficient vanishes.
    CHECK(imitation_coefficient(0.0, 0.0, p) == 0.0);
    // Stressed crowd dominant: ratio uP/uN blows up, xi -> 1, so the
    // coefficient approaches alpha_P.
    CHECK(imitation_coefficient(1.0, 0.0, p) == doctest::Approx(p.alpha_P).epsilon(1e-5));
    // Calm crowd dominant: approaches -alpha_N.
    CHECK(imitation_coefficient(0.0, 1.0, p) == doctest::Approx(-p.alpha_N).epsilon(1e-5));
    // Equal densities: xiP == xiN, so the sign is that of alpha_P - alpha_N.
    double balanced = imitation_coefficient(0.4, 0.4, p);
    CHECK(balanced > 0.0);
    CHECK(balanced == doctest::Approx((p.alpha_P - p.alpha_N) * xi(0.4 / (0.4 + p.eps_guard)))
                          .epsilon(1e-12));
    // Guard keeps the coefficient finite and within [-alpha_N, alpha_P] on a
    // sweep of extreme inputs.
    for (double uP : {0.0, 1e-12, 1e-3, 1.0, 50.0}) {
        for (double uN : {0.0, 1e-12, 1e-3, 1.0, 50.0}) {
            double f = imitation_coefficient(uP, uN, p);
            CHECK(std::isfinite(f));
            CHECK(f <= p.alpha_P + 1e-15);
            CHECK(f >= -p.alpha_N - 1e-15);
        }
    }
}

TEST_CASE("reaction pointwise value and exact antisymmetry") {
    Grid g = small_grid();
    Field uP(g), uN(g);
    uP.fill(0.2);
    uN.fill(0.3);
    ZoneKineticsParams p = zone1_params();

    auto [outP, outN] = reaction_rhs(uP, uN, p);
    // r = a*uN - b*uP + f(uP,uN)*uN*uP with the frozen coefficient above.
    const double r_expected = -0.0016923162128713726;
    for (int c = 0; c < g.cells(); ++c) {
        CHECK(outP[c] == doctest::Approx(r_expected).epsilon(1e-12));
        // Exchange term only: the N rate is the bitwise negation of the P rate.
        CHECK(outN[c] == -outP[c]);
    }
}

TEST_CASE("reaction accumulates into existing buffers") {
    Grid g = small_grid();
    Field uP(g), uN(g), outP(g), outN(g);
    uP.fill(0.2);
    uN.fill(0.3);
    outP.fill(1.0);
    outN.fill(2.0);
    reaction_add(uP, uN, zone1_params(), outP, outN);
    const double r_expected = -0.0016923162128713726;
    CHECK(outP(1, 1) == doctest::Approx(1.0 + r_expected).epsilon(1e-12));
    CHECK(outN(1, 1) == doctest::Approx(2.0 - r_expected).epsilon(1e-12));
}

TEST_CASE("reaction conserves total mass exactly") {
    Grid g(8, 6, 0.0, 0.0, 0.125, 1.0 / 6.0, 1);
    Field uP(g), uN(g);
    for (int c = 0; c < g.cells(); ++c) {
        uP[c] = 0.05 + 0.01 * (c % 7);
        uN[c] = 0.30 - 0.002 * (c % 11);
    }
    auto [outP, outN] = reaction_rhs(uP, uN, zone1_params());
    for (int c = 0; c < g.cells(); ++c) {
        CHECK(outP[c] + outN[c] == 0.0);  // exact by construction
    }
    CHECK(integrate(outP) + integrate(outN) == 0.0);
}

TEST_CASE("kinetics parameter validation") {
    ZoneKineticsParams p = zone1_params();
    CHECK_NOTHROW(p.validate());
    auto bad = p;
    bad.a = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.b = -1e-9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.alpha_P = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.alpha_N = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.eps_guard = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.eps_guard = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("reaction rejects mismatched grids") {
    Grid g1 = small_grid();
    Grid g2(5, 4, 0.0, 0.0, 0.2, 0.25, 1);
    Field uP(g1), uN(g2);
    CHECK_THROWS_AS(reaction_rhs(uP, uN, zone1_params()), std::invalid_argument);
}
