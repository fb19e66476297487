#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stressnet/migration.hpp"

using namespace stressnet;

namespace {

Grid unit_grid(int n, int zone) { return Grid(n, n, 0.0, 0.0, 1.0 / n, 1.0 / n, zone); }

MigrationKernel constant_channel(const Grid& src, const Grid& dst, double p, double m) {
    Field p_out(src, p);
    Field eps_raw(dst, 1.0);
    return MigrationKernel(std::move(p_out), normalize_reception(eps_raw), m);
}

}  // namespace

TEST_CASE("migration kernel validation") {
    Grid g1 = unit_grid(8, 1);
    Grid g2 = unit_grid(8, 2);

    CHECK_NOTHROW(constant_channel(g1, g2, 0.5, 0.2));
    CHECK_NOTHROW(constant_channel(g1, g2, 0.0, 0.0));
    CHECK_NOTHROW(constant_channel(g1, g2, 1.0, 1.0));

    // Proportion outside [0, 1].
    CHECK_THROWS_AS(constant_channel(g1, g2, 0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(constant_channel(g1, g2, 0.5, 1.5), std::invalid_argument);

    // Departure probability outside [0, 1].
    {
        Field p_out(g1, 1.2);
        Field eps(g2, 1.0);
        CHECK_THROWS_AS(MigrationKernel(std::move(p_out), normalize_reception(eps), 0.2),
                        std::invalid_argument);
    }
    {
        Field p_out(g1, -0.01);
        Field eps(g2, 1.0);
        CHECK_THROWS_AS(MigrationKernel(std::move(p_out), normalize_reception(eps), 0.2),
                        std::invalid_argument);
    }

    // Negative reception values.
    {
        Field p_out(g1, 0.5);
        Field eps(g2, -1.0);
        CHECK_THROWS_AS(MigrationKernel(std::move(p_out), std::move(eps), 0.2),
                        std::invalid_argument);
    }

    // Non-unit reception integral (caller forgot to normalize).
    {
        Field p_out(g1, 0.5);
        Field eps(g2, 2.0);
        CHECK_THROWS_AS(MigrationKernel(std::move(p_out), std::move(eps), 0.2),
                        std::invalid_argument);
    }
}

TEST_CASE("gaussian kernel pointwise values") {
    Grid g = unit_grid(8, 1);
    Field k = gaussian_kernel(g, 0.5, 0.5, 0.1);
    // Cell (4, 4) has center (0.5625, 0.5625); distance^2 = 2 * 0.0625^2.
    double d2 = 2.0 * 0.0625 * 0.0625;
    CHECK(k(4, 4) == doctest::Approx(std::exp(-d2 / 0.01)).epsilon(1e-14));
    // Peak value at the nearest center never exceeds 1.
    CHECK(max_value(k) <= 1.0);
    CHECK(min_value(k) > 0.0);
    CHECK_THROWS_AS(gaussian_kernel(g, 0.5, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_kernel(g, 0.5, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("normalize_reception yields unit integral") {
    Grid g = unit_grid(16, 2);
    Field raw = gaussian_kernel(g, 0.3, 0.7, 0.15);
    Field eps = normalize_reception(raw);
    CHECK(integrate(eps) == doctest::Approx(1.0).epsilon(1e-12));
    // Shape is preserved: ratio to raw is a single constant.
    double scale = eps(0, 0) / raw(0, 0);
    CHECK(eps(7, 9) == doctest::Approx(scale * raw(7, 9)).epsilon(1e-13));
    // All-zero profile cannot be normalized.
    Field zero(g, 0.0);
    CHECK_THROWS_AS(normalize_reception(zero), std::invalid_argument);
}

TEST_CASE("migration closed form on constant kernels") {
    // u = 1 on the unit square, p_out = 0.5, m = 0.2, eps_in = 1:
    // departure rate is m*p*u = 0.1 everywhere, I = integral(p*u) = 0.5,
    // arrival rate is eps*m*I = 0.1 everywhere.
    Grid g1 = unit_grid(8, 1);
    Grid g2 = unit_grid(12, 2);
    MigrationKernel k = constant_channel(g1, g2, 0.5, 0.2);

    Field u(g1, 1.0);
    Field src_out(g1, 0.0), dst_out(g2, 0.0);
    double I = migration_add(u, k, src_out, dst_out);

    CHECK(I == doctest::Approx(0.5).epsilon(1e-13));
    for (int c = 0; c < g1.cells(); ++c)
        CHECK(src_out[c] == doctest::Approx(-0.1).epsilon(1e-13));
    for (int c = 0; c < g2.cells(); ++c)
        CHECK(dst_out[c] == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("migration conserves mass across zones") {
    Grid g1 = unit_grid(24, 1);
    Grid g2 = unit_grid(16, 2);
    Field p_raw = gaussian_kernel(g1, 0.8, 0.2, 0.3);  // values in (0, 1]
    Field eps = normalize_reception(gaussian_kernel(g2, 0.4, 0.6, 0.2));
    MigrationKernel k(std::move(p_raw), std::move(eps), 0.35);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.5);
    Field u(g1);
    for (double& v : u.values) v = uni(rng);

    Field src_out(g1, 0.0), dst_out(g2, 0.0);
    double I = migration_add(u, k, src_out, dst_out);

    // What leaves the source equals what enters the destination.
    double leaving = integrate(src_out);
    double entering = integrate(dst_out);
    CHECK(std::abs(leaving + entering) <= 1e-12);
    CHECK(leaving == doctest::Approx(-k.m * I).epsilon(1e-12));

    // The returned integral matches the quadrature helper exactly.
    CHECK(I == weighted_integral(k.p_out, u));
}

TEST_CASE("migration with zero proportion is a no-op") {
    Grid g1 = unit_grid(8, 1);
    Grid g2 = unit_grid(8, 2);
    MigrationKernel k = constant_channel(g1, g2, 0.7, 0.0);
    Field u(g1, 0.9);
    Field src_out(g1, 3.0), dst_out(g2, 4.0);  // sentinels
    double I = migration_add(u, k, src_out, dst_out);
    CHECK(I == 0.0);
    for (double v : src_out.values) CHECK(v == 3.0);
    for (double v : dst_out.values) CHECK(v == 4.0);
}

TEST_CASE("migration_rhs covers both directions") {
    Grid g1 = unit_grid(8, 1);
    Grid g2 = unit_grid(8, 2);
    MigrationKernel k12 = constant_channel(g1, g2, 0.5, 0.2);
    MigrationKernel k21 = constant_channel(g2, g1, 0.25, 0.4);
    Field u1(g1, 1.0), u2(g2, 2.0);

    // One direction only.
    auto [r1, r2] = migration_rhs(u1, u2, k12);
    CHECK(r1(3, 3) == doctest::Approx(-0.1).epsilon(1e-13));
    CHECK(r2(3, 3) == doctest::Approx(0.1).epsilon(1e-13));

    // Both directions: reverse channel moves m*p*u2 = 0.4*0.25*2 = 0.2 back.
    auto [b1, b2] = migration_rhs(u1, u2, k12, &k21);
    CHECK(b1(3, 3) == doctest::Approx(-0.1 + 0.2).epsilon(1e-13));
    CHECK(b2(3, 3) == doctest::Approx(0.1 - 0.2).epsilon(1e-13));
    double total = integrate(b1) + integrate(b2);
    CHECK(std::abs(total) <= 1e-12);
}

TEST_CASE("migration rejects mismatched grids") {
    Grid g1 = unit_grid(8, 1);
    Grid g2 = unit_grid(8, 2);
    Grid g_other = unit_grid(12, 1);
    MigrationKernel k = constant_channel(g1, g2, 0.5, 0.2);
    Field src_out(g1, 0.0), dst_out(g2, 0.0);
    Field u_wrong(g_other, 1.0);  // source field with a different layout
    CHECK_THROWS_AS(migration_add(u_wrong, k, src_out, dst_out), std::invalid_argument);
    Field u_ok(g1, 1.0);
    Field dst_wrong(g_other, 0.0);
    CHECK_THROWS_AS(migration_add(u_ok, k, src_out, dst_wrong), std::invalid_argument);
}
