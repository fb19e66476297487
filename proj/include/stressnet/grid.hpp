#pragma once

#include <cstddef>
#include <vector>

namespace stressnet {

// Uniform cell-centered rectangular grid for one zone. Cell (i, j) has its
// center at (x0 + (i+1/2)*hx, y0 + (j+1/2)*hy); i runs fastest in memory.
struct Grid {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double hx = 0.0;
    double hy = 0.0;
    int zone_id = 0;

    Grid() = default;
    Grid(int nx, int ny, double x0, double y0, double hx, double hy, int zone_id);

    int cells() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    double cell_area() const { return hx * hy; }
    double center_x(int i) const { return x0 + (i + 0.5) * hx; }
    double center_y(int j) const { return y0 + (j + 0.5) * hy; }

    bool same_layout(const Grid& other) const;
};

// Scalar cell values on a grid. Holds a pointer to the grid it was built on;
// the grid must outlive the field.
struct Field {
    const Grid* grid = nullptr;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(&g), values(static_cast<std::size_t>(g.cells()), fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(grid->index(i, j))]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(grid->index(i, j))]; }
    double& operator[](int c) { return values[static_cast<std::size_t>(c)]; }
    double operator[](int c) const { return values[static_cast<std::size_t>(c)]; }
    int size() const { return static_cast<int>(values.size()); }

    void fill(double v);
};

// Compensated (Neumaier) sum of arbitrary doubles in index order. Exposed so
// other modules can reproduce integrate()'s summation exactly.
double compensated_sum(const double* data, std::size_t n);

// Midpoint-rule integral over the zone: compensated sum of cell values times
// the cell area. Deterministic: fixed traversal order.
double integrate(const Field& f);

// Compensated sum of pointwise products a[c]*b[c] times the cell area.
// Same accumulation scheme as integrate().
double weighted_integral(const Field& a, const Field& b);

// Copy a field into an (nx+2) x (ny+2) buffer with mirror ghost cells
// (ghost = adjacent interior value), the zero-flux extension used by the
// diffusion stencil. Row-major with i fastest, ghost ring included.
std::vector<double> neumann_extend(const Field& f);

double min_value(const Field& f);
double max_value(const Field& f);

}  // namespace stressnet
