#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stressnet/grid.hpp"
#include "stressnet/migration.hpp"

using namespace stressnet;

TEST_CASE("grid geometry") {
    Grid g(8, 4, 1.0, 2.0, 0.5, 0.25, 1);
    CHECK(g.cells() == 32);
    CHECK(g.index(3, 2) == 19);
    CHECK(g.center_x(0) == doctest::Approx(1.25));
    CHECK(g.center_y(3) == doctest::Approx(2.875));
    CHECK(g.cell_area() == doctest::Approx(0.125));
    CHECK(g.same_layout(Grid(8, 4, 1.0, 2.0, 0.5, 0.25, 2)));
    CHECK_FALSE(g.same_layout(Grid(8, 8, 1.0, 2.0, 0.5, 0.25, 1)));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(3, 8, 0, 0, 0.1, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(8, 3, 0, 0, 0.1, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(8, 8, 0, 0, 0.0, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(8, 8, 0, 0, 0.1, 0.1, 3), std::invalid_argument);
}

TEST_CASE("compensated summation recovers cancelled terms") {
    // plain left-to-right summation loses the 1.0 entirely here
    double data[3] = {1e16, 1.0, -1e16};
    CHECK(compensated_sum(data, 3) == 1.0);

    // alternating large/small pattern: compare against long double reference
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(10000);
    long double ref = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = U(rng) * (i % 2 ? 1e12 : 1e-6);
        ref += v[i];
    }
    double got = compensated_sum(v.data(), v.size());
    CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-3);  // ref itself carries ~1e-4 noise
    CHECK(got == compensated_sum(v.data(), v.size()));        // deterministic
}

TEST_CASE("integrate constant field") {
    Grid g(16, 8, 0, 0, 0.25, 0.5, 1);
    Field f(g, 2.0);
    CHECK(integrate(f) == doctest::Approx(2.0 * 16.0).epsilon(1e-14));
}

TEST_CASE("integrate gaussian bump matches fine-quadrature reference") {
    // reference: midpoint rule on a 1024x1024 grid, computed independently
    const double reference = 0.03141592653580137;
    Grid g(64, 64, 0, 0, 1.0 / 64, 1.0 / 64, 1);
    Field f = gaussian_kernel(g, 0.5, 0.5, 0.1);
    CHECK(integrate(f) == doctest::Approx(reference).epsilon(1e-11));
}

TEST_CASE("weighted integral equals integral of the product") {
    Grid g(8, 8, 0, 0, 0.125, 0.125, 1);
    Field a(g), b(g), prod(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int c = 0; c < g.cells(); ++c) {
        a[c] = U(rng);
        b[c] = U(rng);
        prod[c] = a[c] * b[c];
    }
    CHECK(weighted_integral(a, b) == integrate(prod));
    Grid other(8, 8, 1, 0, 0.125, 0.125, 1);
    Field c(other, 1.0);
    CHECK_THROWS_AS(weighted_integral(a, c), std::invalid_argument);
}

TEST_CASE("neumann extension mirrors the boundary") {
    Grid g(4, 4, 0, 0, 0.25, 0.25, 1);
    Field f(g);
    for (int c = 0; c < 16; ++c) f[c] = static_cast<double>(c);
    std::vector<double> ext = neumann_extend(f);
    int w = g.nx + 2;
    auto at = [&](int i, int j) { return ext[static_cast<std::size_t>(j) * w + i]; };
    // interior copied
    CHECK(at(1, 1) == f(0, 0));
    CHECK(at(4, 4) == f(3, 3));
    // edges mirror the adjacent interior cell
    CHECK(at(0, 1) == f(0, 0));
    CHECK(at(5, 1) == f(3, 0));
    CHECK(at(1, 0) == f(0, 0));
    CHECK(at(1, 5) == f(0, 3));
    // corners mirror the corner cell
    CHECK(at(0, 0) == f(0, 0));
    CHECK(at(5, 5) == f(3, 3));
}

TEST_CASE("field min and max") {
    Grid g(4, 4, 0, 0, 0.25, 0.25, 1);
    Field f(g, 1.0);
    f(2, 3) = -4.0;
    f(1, 1) = 9.0;
    CHECK(min_value(f) == -4.0);
    CHECK(max_value(f) == 9.0);
}
