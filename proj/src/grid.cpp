#include "stressnet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stressnet {

Grid::Grid(int nx_, int ny_, double x0_, double y0_, double hx_, double hy_, int zone_id_)
    : nx(nx_), ny(ny_), x0(x0_), y0(y0_), hx(hx_), hy(hy_), zone_id(zone_id_) {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("grid: nx and ny must be at least 4, got " +
                                    std::to_string(nx) + " x " + std::to_string(ny));
    if (!(hx > 0.0) || !(hy > 0.0))
        throw std::invalid_argument("grid: cell sizes must be positive");
    if (zone_id != 1 && zone_id != 2)
        throw std::invalid_argument("grid: zone_id must be 1 or 2, got " + std::to_string(zone_id));
}

bool Grid::same_layout(const Grid& other) const {
    return nx == other.nx && ny == other.ny && x0 == other.x0 && y0 == other.y0 &&
           hx == other.hx && hy == other.hy;
}

void Field::fill(double v) {
    std::fill(values.begin(), values.end(), v);
}

double compensated_sum(const double* data, std::size_t n) {
    // Neumaier variant of Kahan summation: running error term catches the
    // low-order bits lost whichever addend is the smaller one.
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double v = data[k];
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double integrate(const Field& f) {
    return compensated_sum(f.values.data(), f.values.size()) * f.grid->cell_area();
}

double weighted_integral(const Field& a, const Field& b) {
    if (!a.grid->same_layout(*b.grid))
        throw std::invalid_argument("weighted_integral: fields live on different grids");
    double sum = 0.0;
    double comp = 0.0;
    const double* pa = a.values.data();
    const double* pb = b.values.data();
    std::size_t n = a.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        double v = pa[k] * pb[k];
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return (sum + comp) * a.grid->cell_area();
}

std::vector<double> neumann_extend(const Field& f) {
    const Grid& g = *f.grid;
    int exnx = g.nx + 2;
    int exny = g.ny + 2;
    std::vector<double> out(static_cast<std::size_t>(exnx) * exny, 0.0);
    auto at = [&](int i, int j) -> double& { return out[static_cast<std::size_t>(j) * exnx + i]; };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            at(i + 1, j + 1) = f(i, j);
    // Mirror edges.
    for (int j = 0; j < g.ny; ++j) {
        at(0, j + 1) = f(0, j);
        at(exnx - 1, j + 1) = f(g.nx - 1, j);
    }
    for (int i = 0; i < g.nx; ++i) {
        at(i + 1, 0) = f(i, 0);
        at(i + 1, exny - 1) = f(i, g.ny - 1);
    }
    // Corners mirror diagonally adjacent interior cells; they never enter the
    // 5-point stencil but keep the buffer fully defined.
    at(0, 0) = f(0, 0);
    at(exnx - 1, 0) = f(g.nx - 1, 0);
    at(0, exny - 1) = f(0, g.ny - 1);
    at(exnx - 1, exny - 1) = f(g.nx - 1, g.ny - 1);
    return out;
}

double min_value(const Field& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const Field& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

}  // namespace stressnet
