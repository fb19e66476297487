#include "stressnet/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stressnet {

void laplacian_add(const Field& f, double d, Field& out) {
    if (d < 0.0)
        throw std::invalid_argument("laplacian: diffusion coefficient must be >= 0");
    if (!f.grid->same_layout(*out.grid))
        throw std::invalid_argument("laplacian: output grid mismatch");
    if (d == 0.0) return;
    const Grid& g = *f.grid;
    const int nx = g.nx;
    const int ny = g.ny;
    const double cx = d / (g.hx * g.hx);
    const double cy = d / (g.hy * g.hy);
    const double* v = f.values.data();
    double* o = out.values.data();
    // Gather form of the flux stencil; clamped row/column indices reproduce
    // the mirror ghost values, so boundary faces contribute zero flux.
    for (int j = 0; j < ny; ++j) {
        const double* row = v + static_cast<std::size_t>(j) * nx;
        const double* row_s = v + static_cast<std::size_t>(j == 0 ? 0 : j - 1) * nx;
        const double* row_n = v + static_cast<std::size_t>(j == ny - 1 ? ny - 1 : j + 1) * nx;
        double* orow = o + static_cast<std::size_t>(j) * nx;
        orow[0] += cx * (row[1] - row[0]) + cy * (row_s[0] + row_n[0] - 2.0 * row[0]);
        for (int i = 1; i < nx - 1; ++i)
            orow[i] += cx * (row[i - 1] + row[i + 1] - 2.0 * row[i]) +
                       cy * (row_s[i] + row_n[i] - 2.0 * row[i]);
        orow[nx - 1] += cx * (row[nx - 2] - row[nx - 1]) +
                        cy * (row_s[nx - 1] + row_n[nx - 1] - 2.0 * row[nx - 1]);
    }
}

Field laplacian(const Field& f, double d) {
    Field out(*f.grid, 0.0);
    laplacian_add(f, d, out);
    return out;
}

DirectionField build_direction_field(const Grid& g, double target_x, double target_y) {
    if (target_x < g.x0 || target_x > g.x0 + g.nx * g.hx ||
        target_y < g.y0 || target_y > g.y0 + g.ny * g.hy)
        throw std::invalid_argument("direction field: target (" + std::to_string(target_x) +
                                    ", " + std::to_string(target_y) +
                                    ") lies outside the zone rectangle");
    DirectionField dir(g);
    // Cell containing the target; the unit vector is singular there.
    int ti = static_cast<int>(std::floor((target_x - g.x0) / g.hx));
    int tj = static_cast<int>(std::floor((target_y - g.y0) / g.hy));
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            if (i == ti && j == tj) continue;
            double dx = target_x - g.center_x(i);
            double dy = target_y - g.center_y(j);
            double r = std::sqrt(dx * dx + dy * dy);
            if (r == 0.0) continue;
            int c = g.index(i, j);
            dir.fx[c] = dx / r;
            dir.fy[c] = dy / r;
        }
    }
    return dir;
}

void advective_divergence_add(const Field& f, const Field& total, const DirectionField& dir,
                              double v_max, Field& out) {
    if (v_max < 0.0)
        throw std::invalid_argument("advection: v_max must be >= 0");
    if (v_max == 0.0) return;
    if (!f.grid->same_layout(*total.grid) || !f.grid->same_layout(*dir.grid) ||
        !f.grid->same_layout(*out.grid))
        throw std::invalid_argument("advection: field/direction grid mismatch");
    const Grid& g = *f.grid;
    const int nx = g.nx;
    const int ny = g.ny;
    const double* pf = f.values.data();
    const double* pt = total.values.data();
    const double* dx = dir.fx.data();
    const double* dy = dir.fy.data();
    double* o = out.values.data();
    const double inv_hx = 1.0 / g.hx;
    const double inv_hy = 1.0 / g.hy;

    // Upwind fluxes per face, then a divergence sweep. The face pass is
    // branchless (max/min split of the signed velocity) and the two passes
    // keep each face value bitwise-shared by its two cells.
    thread_local std::vector<double> flux;
    flux.assign(static_cast<std::size_t>(nx) * ny, 0.0);

    // Vertical faces between (i,j) and (i+1,j), stored at index (i,j), i < nx-1.
    for (int j = 0; j < ny; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx - 1; ++i) {
            std::size_t c = base + i;
            double speed = v_max * std::max(1.0 - 0.5 * (pt[c] + pt[c + 1]), 0.0);
            double vel = speed * 0.5 * (dx[c] + dx[c + 1]);
            flux[c] = std::max(vel, 0.0) * pf[c] + std::min(vel, 0.0) * pf[c + 1];
        }
    }
    for (int j = 0; j < ny; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * nx;
        o[base] -= flux[base] * inv_hx;
        for (int i = 1; i < nx - 1; ++i)
            o[base + i] += (flux[base + i - 1] - flux[base + i]) * inv_hx;
        o[base + nx - 1] += flux[base + nx - 2] * inv_hx;
    }

    // Horizontal faces between (i,j) and (i,j+1), stored at index (i,j), j < ny-1.
    for (int j = 0; j < ny - 1; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            std::size_t c = base + i;
            std::size_t cn = c + nx;
            double speed = v_max * std::max(1.0 - 0.5 * (pt[c] + pt[cn]), 0.0);
            double vel = speed * 0.5 * (dy[c] + dy[cn]);
            flux[c] = std::max(vel, 0.0) * pf[c] + std::min(vel, 0.0) * pf[cn];
        }
    }
    {
        const std::size_t top = static_cast<std::size_t>(ny - 1) * nx;
        for (int i = 0; i < nx; ++i) o[i] -= flux[i] * inv_hy;
        for (int j = 1; j < ny - 1; ++j) {
            const std::size_t base = static_cast<std::size_t>(j) * nx;
            for (int i = 0; i < nx; ++i)
                o[base + i] += (flux[base + i - nx] - flux[base + i]) * inv_hy;
        }
        for (int i = 0; i < nx; ++i) o[top + i] += flux[top + i - nx] * inv_hy;
    }
}

Field advective_divergence(const Field& f, const Field& total, const DirectionField& dir,
                           double v_max) {
    Field out(*f.grid, 0.0);
    advective_divergence_add(f, total, dir, v_max, out);
    return out;
}

double advective_dt_bound(const Grid& g, double v_max) {
    if (v_max <= 0.0) return std::numeric_limits<double>::infinity();
    // Keeps one upwind Euler update a convex combination even when a cell
    // loses mass through faces in both directions: dt * v * (1/hx + 1/hy) * 2
    // bounds the total outflow rate from any cell.
    return 1.0 / (2.0 * v_max * (1.0 / g.hx + 1.0 / g.hy));
}

double diffusive_dt_bound(const Grid& g, double d) {
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    double hx2 = g.hx * g.hx;
    double hy2 = g.hy * g.hy;
    return hx2 * hy2 / (2.0 * d * (hx2 + hy2));
}

}  // namespace stressnet
